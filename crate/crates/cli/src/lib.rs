//! Command-line front end: dataset ingestion, configuration and the
//! subcommands tying estimation, bandwidth selection and simulation together.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;

pub use cli::dispatch;
pub use error::CliError;
