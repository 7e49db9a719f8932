use std::path::{Path, PathBuf};

use graphdim_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag, bad config field or unreadable input.
    #[error("{0}")]
    Config(String),
    #[error("{context}: {source}")]
    Core { context: String, source: CoreError },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 3 for numeric failures, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core {
                source: CoreError::Numeric { .. },
                ..
            } => 3,
            _ => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(source: CoreError) -> Self {
        CliError::Core {
            context: "error".into(),
            source,
        }
    }
}

pub fn config<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// Attach what was being computed to a library error.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for graphdim_core::Result<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            context: what.into(),
            source,
        })
    }
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
