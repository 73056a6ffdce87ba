use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid token `{token}` for group {group}")]
    InvalidToken { token: String, group: String },

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("unsupported group: {0}")]
    Unsupported(String),

    #[error("expansion guard exceeded: {needed} letters, limit {limit}")]
    GuardExceeded { needed: String, limit: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown nilpotency class for group {0}")]
    UnknownClass(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
