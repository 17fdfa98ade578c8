use std::io;

use thiserror::Error;

/// Failure of a command, carrying the process exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid input data or configuration (exit 2).
    #[error("{0}")]
    Input(String),
    /// Unusable player profiles (exit 3).
    #[error("{0}")]
    Profile(String),
    /// Every simulated replication stalled (exit 4).
    #[error("{0}")]
    Stalled(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Input(_) => 2,
            CliError::Profile(_) => 3,
            CliError::Stalled(_) => 4,
        }
    }

    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}
