//! Command-line front end for `betakit-core`.
//!
//! Every subcommand produces a [`report::Report`] that is written as JSON
//! (sorted keys, schema `betakit/1`) or CSV.

pub mod cli;
pub mod error;
pub mod parse;
pub mod report;

pub use cli::{run, RunConfig};
pub use error::{CliError, CliResult};
