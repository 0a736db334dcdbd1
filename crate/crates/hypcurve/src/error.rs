//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed scalar modes without explicit conversion: {0}")]
    MixedModes(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("curves share a common component")]
    CommonComponent,

    #[error("not a curve of real contact: {0}")]
    NotRealContact(String),

    #[error("genericity failure: {0}")]
    GenericityFailure(String),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: String, got: String },

    #[error("singular point on curve: {0}")]
    SingularPoint(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
