//! Error type shared across the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong, split by how the CLI reports it:
/// configuration problems exit with code 1, solver failures with code 2.
#[derive(Debug)]
pub enum Error {
    /// Invalid configuration, parameters out of range, malformed input files.
    Config(String),
    /// A solver failed to converge or produced invalid state.
    Solver(String),
    /// Underlying I/O failure, annotated with the path involved.
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn solver(msg: impl Into<String>) -> Self {
        Error::Solver(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors the CLI treats as configuration errors (exit code 1).
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Io { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Solver(msg) => write!(f, "solver error: {msg}"),
            Error::Io { path, source } => write!(f, "i/o error on {path}: {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
