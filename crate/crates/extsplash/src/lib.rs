//! Command-line front end for `extsplash-core`: runs the check registry,
//! dumps the canonical objects, and writes JSON, CSV or plain-text reports.

pub mod commands;
pub mod config;
pub mod report;
pub mod runner;

pub use commands::{run, Exit};
pub use config::{Cli, CliConfig};
