use thiserror::Error;

/// Errors raised by the kernel.
///
/// Every failure falls into one of three classes (see [`ErrorClass`]) so that
/// front-ends can map them onto stable exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the mathematical input was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// Textual or structured input could not be parsed.
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    /// A computation exceeded its budget or exhausted its retries.
    #[error("resource error: {0}")]
    Resource(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Parse,
    Resource,
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(position: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: msg.into(),
        }
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain(_) => ErrorClass::Domain,
            Error::Parse { .. } => ErrorClass::Parse,
            Error::Resource(_) => ErrorClass::Resource,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
