use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Schema {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: row {row}, column {column}: {message}")]
    Load {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: empty dataset")]
    EmptyDataset { path: PathBuf },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("results: {0}")]
    Results(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
