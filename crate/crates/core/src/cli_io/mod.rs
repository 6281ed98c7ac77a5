//! Configuration parsing, run orchestration and field file formats.

mod config;
mod output;
mod run;

use thiserror::Error;

pub use config::{parse_config, ConfigError, ConfigIssue, OutputFormat, RunConfig, ValidateSpec};
pub use output::{read_raw, sidecar_path, write_field, RawSidecar};
pub use run::{run, simulate_realization, validate, Manifest, ValidationCurve};

/// Process exit codes of the command-line front end.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => exit_code::CONFIG,
            RunError::Numerical(_) => exit_code::NUMERICAL,
            RunError::Io(_) => exit_code::IO,
        }
    }
}
