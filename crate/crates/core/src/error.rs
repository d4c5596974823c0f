//! Error type shared by every module of the crate.

use std::io;

pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// The CLI maps these onto exit codes: configuration and validation
/// problems exit with 2, numeric and reachability problems with 3,
/// I/O problems with 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A config file could not be parsed; carries the offending line.
    #[error("config error at {path}:{line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },

    /// A domain invariant was violated; names the offending field.
    #[error("invalid `{field}`: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },

    /// A phase target temperature cannot be reached from the start
    /// temperature under the given heat generation power.
    #[error("target temperature unreachable: {message} (steady state {steady_state_k} K)")]
    Unreachable {
        steady_state_k: f64,
        message: String,
    },

    /// Numeric failures: divergent inversions, infeasible targets,
    /// step sizes too coarse to resolve the schedule.
    #[error("{0}")]
    Numeric(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn validation(field: &'static str, message: impl Into<String>) -> Self {
        Error::Validation {
            field,
            message: message.into(),
        }
    }

    /// Exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Validation { .. } => 2,
            Error::Unreachable { .. } | Error::Numeric(_) => 3,
            Error::Io { .. } => 4,
        }
    }
}
