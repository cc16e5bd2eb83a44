//! Parameterized model: a closed-form full-load power per antenna count,
//! extended to partial load by the affine slope.

use super::component::{component_supply, ComponentParams};
use crate::error::{Error, Result};

/// Parameters of the parameterized model (per sector unless noted).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ParameterizedParams {
    /// PA output at which peak efficiency is reached (W).
    pub pa_limit_w: f64,
    /// Peak PA efficiency.
    pub max_efficiency: f64,
    /// Efficiency drop per halving of per-PA output.
    pub efficiency_slope: f64,
    /// Baseband power per antenna at the reference bandwidth (W).
    pub baseband_w: f64,
    /// RF power per antenna at the reference bandwidth (W).
    pub rf_w: f64,
    /// Feeder loss.
    pub feeder_loss: f64,
    /// DC-DC loss.
    pub dc_loss: f64,
    /// Cooling loss.
    pub cooling_loss: f64,
    /// AC-DC loss.
    pub ac_loss: f64,
    /// Sectors per site.
    pub sectors: u32,
    /// Maximum RF output per sector (W).
    pub max_tx_power_w: f64,
    /// System bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Bandwidth at which `baseband_w` and `rf_w` apply (Hz).
    pub reference_bandwidth_hz: f64,
    /// Load-dependent slope.
    pub slope: f64,
    /// Sleep power per sector and antenna (W).
    pub sleep_per_antenna_w: f64,
}

impl Default for ParameterizedParams {
    fn default() -> Self {
        Self {
            pa_limit_w: 80.0,
            max_efficiency: 0.36,
            efficiency_slope: 0.15,
            baseband_w: 29.4,
            rf_w: 12.9,
            feeder_loss: 0.5,
            dc_loss: 0.075,
            cooling_loss: 0.1,
            ac_loss: 0.09,
            sectors: 3,
            max_tx_power_w: 40.0,
            bandwidth_hz: 10e6,
            reference_bandwidth_hz: 10e6,
            slope: 4.2,
            sleep_per_antenna_w: 108.0,
        }
    }
}

impl ParameterizedParams {
    /// Checks the parameters, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        for (key, value) in [
            ("pa_limit_w", self.pa_limit_w),
            ("max_efficiency", self.max_efficiency),
            ("max_tx_power_w", self.max_tx_power_w),
            ("bandwidth_hz", self.bandwidth_hz),
            ("reference_bandwidth_hz", self.reference_bandwidth_hz),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(key, "must be positive"));
            }
        }
        for (key, value) in [
            ("feeder_loss", self.feeder_loss),
            ("dc_loss", self.dc_loss),
            ("cooling_loss", self.cooling_loss),
            ("ac_loss", self.ac_loss),
        ] {
            if !(0.0..1.0).contains(&value) {
                return Err(Error::invalid(key, "must be in [0, 1)"));
            }
        }
        for (key, value) in [
            ("baseband_w", self.baseband_w),
            ("rf_w", self.rf_w),
            ("slope", self.slope),
            ("sleep_per_antenna_w", self.sleep_per_antenna_w),
            ("efficiency_slope", self.efficiency_slope),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::invalid(key, "must be finite and >= 0"));
            }
        }
        if self.sectors == 0 {
            return Err(Error::invalid("sectors", "must be at least 1"));
        }
        Ok(())
    }

    /// PA efficiency with `antennas` PAs sharing the maximum output.
    pub fn pa_efficiency(&self, antennas: u32) -> Result<f64> {
        if antennas == 0 {
            return Err(Error::invalid("antennas", "must be at least 1"));
        }
        let per_pa = self.max_tx_power_w / f64::from(antennas);
        let eta = self.max_efficiency
            * (1.0 - self.efficiency_slope * libm::log2(self.pa_limit_w / per_pa));
        if eta <= 0.0 {
            return Err(Error::invalid(
                "antennas",
                "PA efficiency is not positive for this many antennas",
            ));
        }
        Ok(eta)
    }

    /// Total PA consumption of one sector at full load (all `antennas` PAs).
    pub fn pa_power_w(&self, antennas: u32) -> Result<f64> {
        let eta = self.pa_efficiency(antennas)?;
        let d = f64::from(antennas);
        let per_pa = self.max_tx_power_w / (d * eta * (1.0 - self.feeder_loss));
        Ok(d * per_pa)
    }

    /// Per-sector full-load power for `antennas` transmit chains.
    pub fn full_load_w(&self, antennas: u32) -> Result<f64> {
        self.validate()?;
        let d = f64::from(antennas);
        let scale = self.bandwidth_hz / self.reference_bandwidth_hz;
        let numerator = d * scale * (self.baseband_w + self.rf_w) + self.pa_power_w(antennas)?;
        Ok(numerator / ((1.0 - self.dc_loss) * (1.0 - self.ac_loss) * (1.0 - self.cooling_loss)))
    }

    /// Sets the sleep power so that `antennas` chains match the component
    /// model's sleep consumption.
    pub fn fit_sleep_to(&mut self, component: &ComponentParams, antennas: u32) -> Result<()> {
        let sleep = component_supply(component, antennas, 0.0, 0.0, true)?;
        self.sleep_per_antenna_w =
            sleep.total / (f64::from(component.sectors) * f64::from(antennas));
        Ok(())
    }
}

/// Site supply power of the parameterized model at relative load `load`.
pub fn parameterized_supply(params: &ParameterizedParams, antennas: u32, load: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&load) {
        return Err(Error::invalid("load", "must be in [0, 1]"));
    }
    let full = params.full_load_w(antennas)?;
    let sectors = f64::from(params.sectors);
    if load == 0.0 {
        return Ok(sectors * f64::from(antennas) * params.sleep_per_antenna_w);
    }
    Ok(sectors * (full + params.slope * params.max_tx_power_w * (load - 1.0)))
}
