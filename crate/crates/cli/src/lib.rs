//! Command-line front end for the `cca` library: file formats and the
//! `cca` subcommands.

pub mod commands;
pub mod format;

pub use commands::{execute, run, Cli, CliError};
