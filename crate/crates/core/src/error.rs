use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimensions(String),
    #[error("dimension mismatch: ({d1},{k1}) vs ({d2},{k2})")]
    DimensionMismatch { d1: usize, k1: usize, d2: usize, k2: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("not a magic set: {0}")]
    NotMagic(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("multivector is not homogeneous")]
    NotHomogeneous,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
