use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{numerator} is not divisible by {divisor}")]
    NonDivisible { numerator: String, divisor: String },
    #[error("path dips to level {level} after step {position}, below the boundary -{t}")]
    BoundaryViolation {
        position: usize,
        level: i64,
        t: usize,
    },
    #[error("path ends at level {0} instead of 0")]
    EndpointViolation(i64),
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),
    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series constant term is not 1")]
    NonUnitConstantTerm,
    #[error("coefficient index {index} exceeds truncation order {order}")]
    OutOfRange { index: usize, order: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}
