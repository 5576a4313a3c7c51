use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for a {n1}x{n2} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n1: usize,
        n2: usize,
    },

    #[error("query budget exceeded: query number {attempted} with budget {budget}")]
    BudgetExceeded { attempted: u64, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact enumeration over {size} signs exceeds the limit of {limit}; use Monte Carlo")]
    EnumerationTooLarge { size: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
