use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not monotone: smallest eigenvalue of M + M^T is {min_eigenvalue:e}")]
    NotMonotone { min_eigenvalue: f64 },

    #[error("point lies outside the domain of the set-valued part: {0}")]
    Domain(String),

    #[error("non-finite value produced at iteration {t}")]
    NumericFailure { t: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
