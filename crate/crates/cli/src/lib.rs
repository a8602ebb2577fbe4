//! Experiment plumbing behind the `monocycle` binary: grid configs, suites
//! that emit one artifact per row, and report writing.

pub mod artifact;
pub mod config;
pub mod suite;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// The computation ran and its output failed verification.
    #[error("failed: {0}")]
    Failed(String),
}

impl CliError {
    /// 1 for failed assertions, 2 for anything wrong with the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

pub(crate) fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}
