use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use wave_manifold::Error;

/// Failure of a subcommand, carrying the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Malformed flags, config values or inputs.
    Usage(String),
    /// Input that violates a modelling assumption (secondary bifurcation,
    /// degenerate curve, ...).
    Degenerate(String),
    /// One or more oracle reports failed.
    Verification(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
            CliError::Verification(msg) => write!(f, "verification failed: {msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::InvalidGrid(_) => CliError::Usage(e.to_string()),
            _ => CliError::Degenerate(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
