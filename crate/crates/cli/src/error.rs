use std::io;
use std::path::Path;

use derivsamp_core::Error as CoreError;

/// Failures of a command, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{0}")]
    Invalid(String),

    #[error("{0}")]
    Algorithm(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    /// 1 for I/O, 2 for invalid input, 3 for algorithmic failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io { .. } => 1,
            Self::Invalid(_) => 2,
            Self::Algorithm(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Divergence(_)
            | CoreError::RootBracketing { .. }
            | CoreError::Singularity(_) => Self::Algorithm(e.to_string()),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
