//! Library side of the `rpd` command: bundled data, table reproduction and subcommands.

pub mod commands;
pub mod data;
pub mod output;
pub mod reproduce;
pub mod spec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rpd_core::Error),
    #[error(transparent)]
    Harness(#[from] rpd_harness::HarnessError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// A reproduction ran but some cells disagree with the published values.
    #[error("{0} of {1} checks failed")]
    Mismatch(usize, usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
