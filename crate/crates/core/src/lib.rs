//! Base-station power models and power-aware multi-user resource allocation.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`powermodel`]: affine, parameterized and component-level supply power
//!   models of an LTE macro base station.
//! * [`channel`]: user drops, path loss and i.i.d. Rayleigh MIMO channels on
//!   an OFDMA time/frequency grid.
//! * [`optimizer`]: the convex time-share problem solved by a barrier
//!   interior-point method, used for power control, sleep-aware scheduling and
//!   the first stage of the OFDMA allocator.
//! * [`raps`]: the second stage of the OFDMA allocator (quantization,
//!   subcarrier assignment, water-filling).
//! * [`harness`]: benchmarks and per-trial evaluation of every scheme.
//!
//! IO, configuration files and parallel execution live in the `bspower`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod channel;
pub mod error;
pub mod harness;
pub mod optimizer;
pub mod powermodel;
pub mod raps;

pub use error::{Error, Result};

/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Thermal noise power in W over `bandwidth_hz` at `temperature_k`.
pub fn thermal_noise_w(bandwidth_hz: f64, temperature_k: f64) -> f64 {
    bandwidth_hz * BOLTZMANN * temperature_k
}

/// Converts dBm to W.
pub fn dbm_to_w(dbm: f64) -> f64 {
    libm::pow(10.0, (dbm - 30.0) / 10.0)
}
