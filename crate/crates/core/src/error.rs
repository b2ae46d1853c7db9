use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no edge to follow at position {position} of the traced word")]
    NoSuchPath { position: usize },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("resource guard tripped: {0}")]
    ResourceGuard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
