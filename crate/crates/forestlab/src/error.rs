use std::io;
use std::path::PathBuf;

use forestlab_core::Error as CoreError;

/// Errors surfaced by the std layer: core failures plus IO and parsing.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{context}: {source}")]
    Json { context: String, source: serde_json::Error },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        CliError::Json { context: context.into(), source }
    }

    /// 2 for bad input, 3 for resource guards, 4 for consistency failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::ResourceLimit { .. }) => 3,
            CliError::Core(CoreError::Consistency(_) | CoreError::Numerical { .. }) => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
