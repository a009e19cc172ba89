//! File formats, subcommands and the random-graph benchmark behind the
//! `sscaug` binary.

pub mod bench;
pub mod commands;
pub mod error;
pub mod formats;

pub use error::{CliError, Result};
