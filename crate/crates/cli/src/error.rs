//! CLI error type and its exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Structural problems with an input file (bad header, rejected rows).
    #[error("{path}:{line}: {message}")]
    MalformedData {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: no valid data rows ({rejected} rejected)")]
    EmptyFile { path: String, rejected: usize },

    #[error("{path}: {count} malformed row(s) rejected; rerun with --lenient to proceed anyway")]
    RejectedRows { path: String, count: usize },

    /// Bad or missing parameters, from flags or the config file.
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] cureplim::Error),

    #[error("{0} reduction check(s) failed")]
    CheckFailed(usize),
}

impl CliError {
    /// Distinct nonzero exit codes per failure class. Usage errors caught by
    /// the argument parser exit with 2 before this mapping is reached.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::MalformedData { .. }
            | CliError::EmptyFile { .. }
            | CliError::RejectedRows { .. } => 4,
            CliError::Core(_) => 5,
            CliError::CheckFailed(_) => 6,
        }
    }
}
