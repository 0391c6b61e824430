use thiserror::Error;

/// Errors produced by the library.
///
/// `Capability` is reserved for requests that are well-formed but exceed the
/// exhaustive machinery's size limits; callers map it to a distinct exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn capability(message: impl Into<String>) -> Self {
        Error::Capability(message.into())
    }
}
