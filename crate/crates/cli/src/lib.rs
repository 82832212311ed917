//! Command line front end and JSON service for the `hgamma` library.

pub mod api;
pub mod args;
pub mod commands;
pub mod service;
pub mod suites;
pub mod svg;

pub use args::Cli;
pub use commands::{execute, exit_code, Output, EXIT_MATH, EXIT_OK, EXIT_USAGE};
