//! Command-line front end for the `unit_lindley` crate.
//!
//! The binary is `ulindley`; everything it does is available here as
//! functions returning serialisable reports.

pub mod app;
pub mod commands;
pub mod error;
pub mod ingest;
pub mod output;

pub use error::{exit, CliError};
