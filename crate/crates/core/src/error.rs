use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operand dimensions are incompatible with the operation.
    #[error("shape error: {0}")]
    Shape(String),
    /// Input is outside the mathematical domain of the operation
    /// (non-Hermitian operator, invalid probabilities, negative spectrum, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure failed to meet its tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
