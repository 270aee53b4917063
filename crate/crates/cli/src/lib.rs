//! Command-line front end: configuration files, reports and output formats.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;

pub use commands::{run, Cli, CliError};
pub use config::{parse_config, ConfigError, RunConfig};
