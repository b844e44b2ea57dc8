use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    SizeGuard(String),

    #[error("{0}")]
    Verification(String),

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::SizeGuard(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Output(_) => 1,
        }
    }
}

impl From<sgo_core::Error> for CliError {
    fn from(e: sgo_core::Error) -> Self {
        match e {
            sgo_core::Error::TooLarge { .. } => {
                CliError::SizeGuard(format!("{e} (use --force or raise SGO_MAX_GRID)"))
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
