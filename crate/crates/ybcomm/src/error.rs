use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("sampler exhausted after {0} attempts")]
    Exhausted(usize),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
