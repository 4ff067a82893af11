use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document.
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed input that violates a data invariant (degenerate
    /// rectangle, overlapping features, bad edge).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
