//! User placement, path loss and shadowing.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Scenario;
use crate::error::{Error, Result};

/// Macro-cell path loss in dB at `distance_m` (2 GHz urban model).
pub fn path_loss_db(distance_m: f64) -> f64 {
    128.1 + 37.6 * libm::log10(distance_m / 1000.0)
}

/// Linear gain at `distance_m` with one log-normal shadowing draw.
pub fn path_gain<R: Rng + ?Sized>(
    distance_m: f64,
    shadowing_std_db: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(Error::invalid("distance_m", "must be positive and finite"));
    }
    let z: f64 = StandardNormal.sample(rng);
    Ok(gain_from_db(
        path_loss_db(distance_m) + shadowing_std_db * z,
    ))
}

fn gain_from_db(loss_db: f64) -> f64 {
    libm::pow(10.0, -loss_db / 10.0)
}

/// Large-scale state of all users in one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct UserDrop {
    /// Distance of each user from the base station (m).
    pub distance_m: Vec<f64>,
    /// Shadowing realization per user (dB).
    pub shadowing_db: Vec<f64>,
    /// Linear power gain per user (path loss and shadowing).
    pub gain: Vec<f64>,
}

impl UserDrop {
    /// Places `scenario.users` users uniformly over the annulus between the
    /// minimum distance and the cell radius, then draws their shadowing.
    pub fn sample<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Self {
        let inner = scenario.min_distance_m * scenario.min_distance_m;
        let outer = scenario.max_distance_m * scenario.max_distance_m;
        let mut distance_m = Vec::with_capacity(scenario.users);
        let mut shadowing_db = Vec::with_capacity(scenario.users);
        let mut gain = Vec::with_capacity(scenario.users);
        for _ in 0..scenario.users {
            let u: f64 = rng.random();
            let d = libm::sqrt(inner + u * (outer - inner));
            let z: f64 = StandardNormal.sample(rng);
            let x = scenario.shadowing_std_db * z;
            distance_m.push(d);
            shadowing_db.push(x);
            gain.push(gain_from_db(path_loss_db(d) + x));
        }
        Self {
            distance_m,
            shadowing_db,
            gain,
        }
    }

    /// Drop with fixed gains, no geometry.
    pub fn from_gains(gain: Vec<f64>) -> Self {
        let n = gain.len();
        Self {
            distance_m: alloc::vec![0.0; n],
            shadowing_db: alloc::vec![0.0; n],
            gain,
        }
    }
}
