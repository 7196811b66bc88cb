use thiserror::Error;

/// Errors shared by every module of the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} out of range (every cyclic modulus must be >= 2)")]
    ModulusOutOfRange(u64),

    #[error("shape mismatch: expected {expected} coordinates, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("structure tensor dimensions do not match the generator counts")]
    TensorShapeMismatch,

    #[error("additive map not well defined on generator {index}")]
    NotWellDefined { index: usize },

    #[error("tensor entry at ({i},{j},{k}) is not well defined")]
    TensorNotWellDefined { i: usize, j: usize, k: usize },

    #[error("cap exceeded: needed {needed}, cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("instance has not passed associativity validation")]
    NotValidated,

    #[error("map is not a left derivation")]
    NotLeftDerivation,

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
