//! Command implementations behind the `nilmoduli` binary.
//!
//! Every command returns a [`Report`]; the binary prints it as JSON with
//! sorted keys and 17 significant digits, or as `path = value` lines.

pub mod commands;
mod error;
pub mod input;
pub mod output;
mod report;
pub mod tables;
pub mod verify;

pub use error::CliError;
pub use report::{Report, SCHEMA};
