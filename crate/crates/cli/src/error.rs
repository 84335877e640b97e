use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    #[error("invalid environment: {0}")]
    Environment(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] entswitch_core::Error),

    #[error("numerical failure: {0}")]
    InvalidOutput(String),
}

impl CliError {
    /// Process exit status: 1 for configuration and I/O problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) | CliError::InvalidOutput(_) => 2,
            _ => 1,
        }
    }
}
