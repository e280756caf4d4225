use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("matching is not stable: {0}")]
    NotStable(String),

    #[error("tie detected: {0}")]
    TieDetected(String),

    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub(crate) fn limit(message: impl Into<String>) -> Self {
        Error::LimitExceeded(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
