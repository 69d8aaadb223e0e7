//! File formats and command implementations behind the `corridor-rays`
//! binary: JSON scenarios, antenna patterns, measurement and sweep CSVs,
//! path-loss fit records.

pub mod commands;
pub mod error;
pub mod formats;
pub mod pattern_arg;
pub mod scenario_file;

pub use error::{CliError, CliResult};
