//! Command-line front end for `epkit`: reads matrix files, runs the
//! classification, property checks and model studies, and writes JSON reports.
//!
//! Exit status is 0 on success, 1 when a checked property fails and 2 on
//! usage or input errors.

pub mod args;
pub mod commands;
pub mod report;

pub use args::Cli;
pub use commands::{execute, CliError};
pub use report::{LimitStudy, Payload, ReportFile, SuiteReport, TOOL_VERSION};
