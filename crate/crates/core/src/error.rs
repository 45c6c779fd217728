use thiserror::Error;

/// Errors produced by every fallible operation in this crate.
///
/// `ResourceLimit` and `Cancelled` mean "no answer was computed"; they are
/// never a substitute for a negative verdict.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("search cancelled")]
    Cancelled,
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }

    pub(crate) fn limit(message: impl Into<String>) -> Self {
        Error::ResourceLimit(message.into())
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_) | Error::Cancelled)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
