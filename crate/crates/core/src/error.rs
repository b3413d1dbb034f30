use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {what} (expected {expected}, got {actual})")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("erasure at ({row}, {col}) lies outside the support of the generator matrix")]
    SupportViolation { row: usize, col: usize },

    #[error("{what} = {actual} exceeds the exhaustive limit {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid matrix shape: k = {k}, n = {n} (need 1 <= k <= n)")]
    Shape { k: usize, n: usize },

    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
