//! Computational algebra workbench for finite gamma-rings: instance
//! construction from structure constants, structural analysis (center,
//! prime, semiprime), enumeration of derivations and endomorphisms, strong
//! commutativity preservation, and exhaustive theorem verification with
//! hypothesis-dropping counterexample search.

pub mod abelian;
pub mod error;
pub mod gammaring;
pub mod instances;
pub mod maps;
pub mod report;
pub mod structure;
pub mod theorems;

pub use abelian::{AdditiveMap, Element, FinAbGroup};
pub use error::{Error, Result};
pub use gammaring::{ExpansionSide, GammaRing, OpTable, Residual};
pub use report::{VerdictReport, Witness};
