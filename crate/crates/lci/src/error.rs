use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LciError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LciError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] lci_core::Error),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("{0}")]
    Usage(String),
    #[error("seed set reaches {replayed:.6} of the users on replay, below the target {beta}")]
    Soundness { beta: f64, replayed: f64 },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl LciError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LciError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            LciError::Usage(_) => 2,
            LciError::Io { .. } => 3,
            LciError::Parse { .. } | LciError::Csv(_) | LciError::Json(_) => 4,
            LciError::InvalidNetwork(_) => 5,
            LciError::Core(e) => match e {
                lci_core::Error::InvalidParameter(_) | lci_core::Error::TooManyUsers { .. } => 2,
                lci_core::Error::Unreachable { .. } => 6,
                _ => 5,
            },
            LciError::Soundness { .. } => 7,
        }
    }
}
