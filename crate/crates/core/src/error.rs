use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {requested} qubits requested, limit is {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("qubit range error: {0}")]
    Range(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {message}", location(path, *row, *column))]
    Ingestion { path: PathBuf, row: Option<usize>, column: Option<usize>, message: String },

    #[error("training failed: {0}")]
    Training(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn location(path: &std::path::Path, row: Option<usize>, column: Option<usize>) -> String {
    match (row, column) {
        (Some(r), Some(c)) => format!("{}: row {r}, column {c}", path.display()),
        (Some(r), None) => format!("{}: row {r}", path.display()),
        _ => path.display().to_string(),
    }
}

impl Error {
    /// Process exit status used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::Range(_) => 2,
            Error::Ingestion { .. } | Error::Training(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => 3,
            Error::Capacity { .. } => 4,
            Error::Numeric(_) => 1,
        }
    }
}
