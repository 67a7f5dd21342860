use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the commands, each mapped to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid attack: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] pingpong_core::Error),
}

impl CliError {
    pub const SUCCESS: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const IO_OR_USAGE: u8 = 2;
    pub const VALIDATION: u8 = 3;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => Self::IO_OR_USAGE,
            CliError::Invalid(_) | CliError::Core(pingpong_core::Error::InvalidAttack(_)) => {
                Self::VALIDATION
            }
            CliError::Core(_) => Self::INTERNAL,
        }
    }
}
