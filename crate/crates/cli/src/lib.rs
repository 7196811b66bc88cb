//! Command-line surface for the gamma-ring workbench: the `gammaring v1`
//! instance text format, deterministic JSON reports, and the command
//! dispatcher behind the `gammaring` binary.

pub mod app;
pub mod format;
pub mod report;

pub use app::{execute, Cli};
pub use format::{emit_instance, parse_instance};
pub use report::{InstanceInfo, ReportDocument};
