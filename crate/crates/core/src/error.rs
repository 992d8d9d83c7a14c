use thiserror::Error;

/// Failures shared by every engine in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("arity mismatch: expected {expected} entries, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(usize, usize),

    /// A rational factor was evaluated at one of its poles.
    #[error("pole: {0}")]
    Pole(String),

    /// A matrix coefficient leaving a subquotient was nonzero.
    #[error("closure violated: {0}")]
    Closure(String),

    /// A q-exponent that should be an integer (or non-negative) was not.
    #[error("integrality violated: {0}")]
    Integrality(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
