//! Configuration, experiment dispatch and result files for the `entswitch`
//! command-line tool.

pub mod config;
mod error;
pub mod output;
pub mod run;

pub use config::{parse_config, ConfigError, Experiment, RunConfig};
pub use error::CliError;
pub use run::{run, RunSummary};
