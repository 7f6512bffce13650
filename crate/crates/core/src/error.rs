use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Precondition` covers bad input (wrong dimensions, non-convenient
/// polytopes, malformed posets). `Invariant` means an internal identity
/// failed and points to a bug rather than to the caller.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors caused by the caller's input.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::DimensionMismatch(_) | Error::Precondition(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
