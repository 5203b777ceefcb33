use thiserror::Error;

/// Errors surfaced by any module of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("matrix is numerically singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("principal logarithm undefined: an eigenvalue lies on the closed negative real axis")]
    NonPrincipalLog,

    #[error("eigendecomposition numerically unreliable (condition estimate {cond:e})")]
    DefectiveMatrix { cond: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("class {class} has {size} members, at least {needed} required")]
    ClassTooSmall {
        class: usize,
        size: usize,
        needed: usize,
    },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported model schema version {found} (this build reads version {supported})")]
    SchemaVersion { found: u64, supported: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
