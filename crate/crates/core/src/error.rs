//! Crate error type.

use alloc::string::String;

/// Errors raised by model evaluation and configuration validation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its valid domain. `key` names the parameter.
    #[error("invalid value for `{key}`: {reason}")]
    InvalidParameter {
        /// Dotted name of the offending parameter.
        key: String,
        /// Human readable explanation.
        reason: String,
    },
    /// A lookup curve was evaluated outside its tabulated domain.
    #[error("`{curve}` evaluated at {value} outside its domain [{min}, {max}]")]
    OutOfDomain {
        /// Curve name.
        curve: String,
        /// Requested abscissa.
        value: f64,
        /// Lower end of the domain.
        min: f64,
        /// Upper end of the domain.
        max: f64,
    },
}

impl Error {
    /// Shorthand for [`Error::InvalidParameter`].
    pub fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
