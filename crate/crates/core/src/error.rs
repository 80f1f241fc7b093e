use thiserror::Error;

use crate::linalg::LinalgError;
use crate::pgroup::GroupError;

/// Errors raised above the linear-algebra and group layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("d∘d ≠ 0 leaving degree {degree}: entry ({row}, {col}) of the composite is nonzero")]
    NotAComplex { degree: i64, row: usize, col: usize },
    #[error("not a chain map at degree {0}")]
    NotAChainMap(i64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a cycle")]
    NotACycle,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
