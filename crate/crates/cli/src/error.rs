use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] symkl::Error),

    #[error("cache i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corrupt cache entry {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },

    #[error("cache entry {path} failed re-verification: {source}")]
    Stale {
        path: PathBuf,
        #[source]
        source: symkl::Error,
    },

    #[error("bad argument: {0}")]
    Usage(String),
}

impl CliError {
    /// Short machine-readable tag for failure reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(symkl::Error::CheckFailed { .. }) | CliError::Stale { .. } => "check-failed",
            CliError::Core(_) => "computation",
            CliError::Io { .. } => "io",
            CliError::Corrupt { .. } => "corrupt-cache",
            CliError::Usage(_) => "usage",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
