//! Experiment commands for the `avgtime` binary.
//!
//! Every command returns a [`Table`] that renders to CSV; the binary writes
//! it and exits nonzero when any asserted row fails.

pub mod commands;
pub mod config;
pub mod explore;
pub mod montecarlo;
pub mod table;

use avgtime::measure::MeasureError;
use avgtime::FormulaError;

pub use table::{Status, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
