use thiserror::Error;

/// Errors produced by the exact and numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZeroPoly,

    #[error("division by zero rational function")]
    DivisionByZeroRatFunc,

    #[error("pole at a = {point}: denominator of {context} vanishes")]
    Pole { point: String, context: String },

    #[error("precondition violated for `{field}`: {message}")]
    Precondition { field: String, message: String },

    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric (entry ({i},{j}) differs from ({j},{i}))")]
    NotSymmetric { i: usize, j: usize },

    #[error("matrix is not positive definite ({witness})")]
    NotPositiveDefinite { witness: String },

    #[error("positive-definiteness is numerically indeterminate (min eigenvalue {min_eigenvalue} within tolerance band {band})")]
    Indeterminate {
        min_eigenvalue: String,
        band: String,
    },

    #[error("degenerate pivot while eliminating element ({i},{j})")]
    DegeneratePivot { i: usize, j: usize },

    #[error("root isolation found {found} roots, expected {expected}")]
    RootCount { expected: usize, found: usize },

    #[error("{0}")]
    Numerical(String),
}

impl Error {
    pub fn precondition(field: &str, message: impl Into<String>) -> Self {
        Error::Precondition {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn parse(field: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
