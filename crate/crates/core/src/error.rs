use thiserror::Error;

/// Errors raised by the set calculus and its charts.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric precondition was violated (pole of a chart, non-unit
    /// axis, point off a boundary, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The request itself is malformed (unknown property, bad descriptor).
    #[error("usage error: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
