//! Command-line Monte Carlo driver for `bspower-core`.
//!
//! Adds what the `no_std` core leaves out: TOML configuration, rate grids,
//! parallel deterministic sweeps, CSV/JSON output and the `bspower` binary.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod cli;
pub mod config;
pub mod error;
pub mod logging;
pub mod montecarlo;
pub mod output;
pub mod rates;

pub use error::{AppError, Result};
