//! File formats, reports, certificate replay and the command implementations
//! behind the `shiftlab` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod report;
pub mod verify;

pub use error::CliError;
pub use report::Report;
pub use shiftlab_core as core;
