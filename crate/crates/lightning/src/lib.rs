//! Command-line harness for lightning-model experiments.

pub mod config;
pub mod error;
pub mod grid;
pub mod output;
pub mod runner;

pub use config::{parse_config, Args, Command, ExperimentSpec, FileConfig, Format};
pub use error::{CliError, CliResult};
pub use output::{write_atomic, write_records, ResultRecord};
pub use runner::{run, run_with_threads};
