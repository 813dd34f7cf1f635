use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("field error: {0}")]
    Field(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("group error: {0}")]
    Group(String),
    #[error("L-function error: {0}")]
    LFunction(String),
    #[error("recognition error: {0}")]
    Recognition(String),
    #[error("sign resolution error: {0}")]
    Signs(String),
    #[error("SIC error: {0}")]
    Sic(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
