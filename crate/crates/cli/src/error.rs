use std::path::PathBuf;

use cstar_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
/// At least one suite check failed.
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } | CliError::Parse { .. } => EXIT_USAGE,
            CliError::Core(e) => match e {
                CoreError::UnknownNorm(_)
                | CoreError::UnknownFunction(_)
                | CoreError::Parse(_)
                | CoreError::BadParameter(_)
                | CoreError::BadExponent(_)
                | CoreError::DimensionMismatch { .. }
                | CoreError::NotSquare { .. }
                | CoreError::InvalidShape { .. }
                | CoreError::UnclaimedNorm(_) => EXIT_USAGE,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
