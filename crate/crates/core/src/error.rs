use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (JSON, numbers, labelings).
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that violates a model invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// An exhaustive routine was asked to enumerate more than it allows.
    #[error("instance too large for {what}: {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: String,
        limit: u64,
    },
    /// The operation's mathematical precondition does not hold.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
