use std::io;
use std::path::{Path, PathBuf};

use cellbench::dataset::DatasetError;
use cellbench::scoring::ScoreError;
use thiserror::Error;

/// Process exit codes, one per error category.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const DATA: i32 = 4;
    pub const MISSING_INPUT: i32 = 5;
    pub const SCORING: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Data(String),
    #[error("missing input: {0}")]
    Missing(String),
    #[error("scoring failed: {0}")]
    Scoring(#[from] ScoreError),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Data(_) => exit::DATA,
            CliError::Missing(_) => exit::MISSING_INPUT,
            CliError::Scoring(_) => exit::SCORING,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Io { path, source } if source.kind() == io::ErrorKind::NotFound => {
                CliError::Missing(path.display().to_string())
            }
            DatasetError::Io { path, source } => CliError::Io { path, source },
            DatasetError::InvalidIndex { .. } => CliError::Usage(e.to_string()),
            DatasetError::Geometry(_) => CliError::Internal(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
