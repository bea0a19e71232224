//! Configuration, CSV reporting and subcommands behind the `cvqt` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{cmd_calibrate, cmd_run, cmd_sweep, cmd_table1, Outcome, Status};
pub use config::RunConfig;
pub use error::{CliError, Result};
pub use report::ReportTable;
