use thiserror::Error;

/// Errors raised by the exact-arithmetic kernels and the deciders built on them.
///
/// Undecided outcomes are *values* of the decision types, never errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("operands live in different quadratic fields")]
    FieldMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("value out of range: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
