//! Application errors and their exit codes.

use std::path::PathBuf;

/// Errors surfaced by the command-line driver.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// A configuration value is invalid. `key` names it.
    #[error("invalid `{key}`: {reason}")]
    Config {
        /// Dotted key of the offending value.
        key: String,
        /// What is wrong with it.
        reason: String,
    },
    /// The configuration file could not be parsed.
    #[error("cannot parse {path}: {message}")]
    ConfigFile {
        /// File being read.
        path: PathBuf,
        /// Parser diagnostic, including the offending key.
        message: String,
    },
    /// Reading or writing a file failed.
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Every trial at every rate point was in outage.
    #[error("sweep infeasible: every trial of every scheme was in outage")]
    Infeasible,
}

impl AppError {
    /// Shorthand for [`AppError::Config`].
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        AppError::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Prefixes the key of a configuration error with `section`.
    pub fn in_section(self, section: &str) -> Self {
        match self {
            AppError::Config { key, reason } => AppError::Config {
                key: format!("{section}.{key}"),
                reason,
            },
            other => other,
        }
    }

    /// Process exit code: 2 for an infeasible sweep, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Infeasible => 2,
            _ => 1,
        }
    }
}

impl From<bspower_core::Error> for AppError {
    fn from(err: bspower_core::Error) -> Self {
        match err {
            bspower_core::Error::InvalidParameter { key, reason } => {
                AppError::Config { key, reason }
            }
            bspower_core::Error::OutOfDomain { ref curve, .. } => AppError::Config {
                key: curve.clone(),
                reason: err.to_string(),
            },
        }
    }
}

/// Result alias for the driver.
pub type Result<T> = std::result::Result<T, AppError>;
