use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operands over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// Two computations that must agree did not. Always a bug or corrupt input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::GuardExceeded(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }
}
