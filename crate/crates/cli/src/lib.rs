//! Configuration parsing, sweep orchestration and CSV output for the
//! `casimir` command-line tool.

pub mod config;
pub mod run;

use casimir_core::CasimirError;
use thiserror::Error;

pub use config::{parse_config, RunConfig};
pub use run::{execute, run, Outcome, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("invalid model: {0}")]
    Model(#[from] CasimirError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const CONVERGENCE: i32 = 2;
}
