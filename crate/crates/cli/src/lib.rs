//! Experiment orchestration around `glsim-core`: JSON config ingestion,
//! seeded replica fan-out, statistical validation, and deterministic
//! file outputs. The `glsim` binary wires these into the `simulate`,
//! `analyze`, and `validate` subcommands.

pub mod config;
pub mod output;
pub mod runner;
pub mod validate;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("validation failed: {0} check(s) did not pass")]
    ChecksFailed(usize),
}

impl CliError {
    /// Process exit code: 2 for config problems, 3 for numeric failures
    /// (including failed validation checks), 1 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 1,
            CliError::Numeric(_) | CliError::ChecksFailed(_) => 3,
        }
    }
}

impl From<glsim_core::Error> for CliError {
    fn from(e: glsim_core::Error) -> Self {
        match e {
            glsim_core::Error::Numeric(msg) => CliError::Numeric(msg),
            other => CliError::Config(other.to_string()),
        }
    }
}
