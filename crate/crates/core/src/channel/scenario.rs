//! Simulation scenario parameters.

use crate::error::{Error, Result};
use crate::thermal_noise_w;

/// How channel coefficients vary across the resource grid of one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Fading {
    /// Independent coefficients per resource block.
    #[default]
    Iid,
    /// One draw per user, constant over the whole frame.
    Block,
}

/// Single-cell downlink scenario.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Scenario {
    /// Number of users per cell.
    pub users: usize,
    /// OFDMA subcarriers per slot.
    pub subcarriers: usize,
    /// Slots per frame.
    pub slots: usize,
    /// System bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Bandwidth of one subcarrier (Hz).
    pub subcarrier_bandwidth_hz: f64,
    /// Slot duration (s).
    pub slot_duration_s: f64,
    /// Frame duration (s).
    pub frame_duration_s: f64,
    /// Receiver noise temperature (K).
    pub temperature_k: f64,
    /// Carrier frequency (Hz).
    pub carrier_hz: f64,
    /// Receive antennas per user.
    pub receive_antennas: usize,
    /// Largest number of transmit antennas the base station may activate.
    pub max_transmit_antennas: usize,
    /// Maximum RF transmit power per sector (W).
    pub max_tx_power_w: f64,
    /// Closest user distance (m).
    pub min_distance_m: f64,
    /// Cell radius (m).
    pub max_distance_m: f64,
    /// Log-normal shadowing standard deviation (dB).
    pub shadowing_std_db: f64,
    /// Fading variation over the frame.
    pub fading: Fading,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            users: 10,
            subcarriers: 50,
            slots: 10,
            bandwidth_hz: 10e6,
            subcarrier_bandwidth_hz: 200e3,
            slot_duration_s: 1e-3,
            frame_duration_s: 10e-3,
            temperature_k: 290.0,
            carrier_hz: 2e9,
            receive_antennas: 2,
            max_transmit_antennas: 2,
            max_tx_power_w: 40.0,
            min_distance_m: 40.0,
            max_distance_m: 250.0,
            shadowing_std_db: 8.0,
            fading: Fading::Iid,
        }
    }
}

impl Scenario {
    /// Noise power over the whole system bandwidth (W).
    pub fn noise_w(&self) -> f64 {
        thermal_noise_w(self.bandwidth_hz, self.temperature_k)
    }

    /// Noise power over one subcarrier (W).
    pub fn subcarrier_noise_w(&self) -> f64 {
        thermal_noise_w(self.subcarrier_bandwidth_hz, self.temperature_k)
    }

    /// Resource blocks per frame.
    pub fn blocks(&self) -> usize {
        self.subcarriers * self.slots
    }

    /// Zero-based `(subcarrier, slot)` of the block nearest the frame center.
    pub fn center_block(&self) -> (usize, usize) {
        (self.subcarriers.div_ceil(2) - 1, self.slots.div_ceil(2) - 1)
    }

    /// Checks the scenario, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        for (key, value) in [
            ("users", self.users),
            ("subcarriers", self.subcarriers),
            ("slots", self.slots),
            ("receive_antennas", self.receive_antennas),
        ] {
            if value == 0 {
                return Err(Error::invalid(key, "must be at least 1"));
            }
        }
        if !(1..=2).contains(&self.max_transmit_antennas) {
            return Err(Error::invalid("max_transmit_antennas", "must be 1 or 2"));
        }
        for (key, value) in [
            ("bandwidth_hz", self.bandwidth_hz),
            ("subcarrier_bandwidth_hz", self.subcarrier_bandwidth_hz),
            ("slot_duration_s", self.slot_duration_s),
            ("frame_duration_s", self.frame_duration_s),
            ("temperature_k", self.temperature_k),
            ("carrier_hz", self.carrier_hz),
            ("max_tx_power_w", self.max_tx_power_w),
            ("min_distance_m", self.min_distance_m),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(key, "must be positive and finite"));
            }
        }
        if !(self.max_distance_m > self.min_distance_m && self.max_distance_m.is_finite()) {
            return Err(Error::invalid(
                "max_distance_m",
                "must exceed min_distance_m",
            ));
        }
        if !(self.shadowing_std_db >= 0.0 && self.shadowing_std_db.is_finite()) {
            return Err(Error::invalid(
                "shadowing_std_db",
                "must be finite and >= 0",
            ));
        }
        let grid_bandwidth = self.subcarriers as f64 * self.subcarrier_bandwidth_hz;
        if (grid_bandwidth - self.bandwidth_hz).abs() > 1e-9 * self.bandwidth_hz {
            return Err(Error::invalid(
                "subcarrier_bandwidth_hz",
                "subcarriers * subcarrier_bandwidth_hz must equal bandwidth_hz",
            ));
        }
        let frame = self.slots as f64 * self.slot_duration_s;
        if (frame - self.frame_duration_s).abs() > 1e-9 * self.frame_duration_s {
            return Err(Error::invalid(
                "frame_duration_s",
                "must equal slots * slot_duration_s",
            ));
        }
        Ok(())
    }
}
