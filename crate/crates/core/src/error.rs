use thiserror::Error;

/// Errors produced by the spectral computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid degree: k = {k} is outside 0..={n}")]
    InvalidDegree { n: i64, k: i64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("budget exceeded: {vertex_count} vertices requested, limit is {limit}")]
    BudgetExceeded { vertex_count: u128, limit: u128 },

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("argument {value} outside domain {domain}")]
    DomainViolation { value: f64, domain: &'static str },

    #[error("dimension mismatch: expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigenvalue index {index} out of range 0..{len}")]
    InvalidIndex { index: usize, len: usize },

    /// An arithmetic invariant that theory guarantees was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
