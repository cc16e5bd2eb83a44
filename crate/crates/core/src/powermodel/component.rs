//! Component-level supply model.
//!
//! Each sector consumes power in its power amplifiers (PA), RF chains and
//! baseband (BB) processing. DC-DC and AC-DC conversion and active cooling add
//! losses on top. All reported values are for the whole site, i.e. already
//! multiplied by the number of sectors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::curve::{EfficiencyCurve, LossCurve};
use crate::error::{Error, Result};

/// One baseband sub-component.
///
/// Its consumption is `reference_w * D^antenna_exponent * f^bandwidth_exponent`
/// for `D` antennas and bandwidth fraction `f`; in sleep mode it is further
/// multiplied by `sleep_factor`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct BasebandRow {
    /// Sub-component name.
    pub name: String,
    /// Consumption at one antenna and full bandwidth (W).
    pub reference_w: f64,
    /// Scaling exponent in the number of antennas.
    pub antenna_exponent: f64,
    /// Scaling exponent in the bandwidth fraction.
    pub bandwidth_exponent: f64,
    /// 1 if the row stays on in sleep mode, 0 if it is switched off.
    pub sleep_factor: f64,
}

impl BasebandRow {
    fn new(
        name: &str,
        reference_w: f64,
        antenna_exponent: f64,
        bandwidth_exponent: f64,
        sleep_factor: f64,
    ) -> Self {
        Self {
            name: String::from(name),
            reference_w,
            antenna_exponent,
            bandwidth_exponent,
            sleep_factor,
        }
    }
}

/// Parameters of the component model.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComponentParams {
    /// Sectors per site.
    pub sectors: u32,
    /// Maximum RF output power per sector (W), used for the rated operating point.
    pub max_tx_power_w: f64,
    /// Feeder loss between PA and antenna, in `[0, 1)`.
    pub feeder_loss: f64,
    /// PA efficiency versus per-PA output power.
    pub pa_efficiency: EfficiencyCurve,
    /// Bias power of one PA while active, independent of output (W).
    pub pa_idle_w: f64,
    /// Power of one PA in sleep mode (W).
    pub pa_sleep_w: f64,
    /// Power of one RF chain, active or asleep (W).
    pub rf_per_chain_w: f64,
    /// Baseband sub-components.
    pub baseband: Vec<BasebandRow>,
    /// DC-DC conversion loss.
    pub dc_loss: LossCurve,
    /// AC-DC conversion loss.
    pub ac_loss: LossCurve,
    /// Cooling overhead relative to the electrical load.
    pub cooling_loss: f64,
    /// Rated DC-DC output per sector (W); `None` rates it at 1.1 times the
    /// full-load draw for the antenna count being evaluated.
    pub dc_max_output_w: Option<f64>,
    /// Rated AC-DC output per sector (W); `None` as for DC-DC.
    pub ac_max_output_w: Option<f64>,
}

impl Default for ComponentParams {
    /// LTE macro site, three sectors, 40 W per sector.
    fn default() -> Self {
        Self {
            sectors: 3,
            max_tx_power_w: 40.0,
            feeder_loss: 0.5,
            pa_efficiency: EfficiencyCurve::LogHeuristic {
                max_efficiency: 0.54,
                slope: 0.15,
                limit_w: 373.0,
                // Below ln(2)-scaled slope the consumption p / eta(p) would
                // decrease with output, so clip there.
                min_efficiency: 0.117,
            },
            pa_idle_w: 36.6,
            pa_sleep_w: 27.75,
            rf_per_chain_w: 12.94,
            baseband: vec![
                BasebandRow::new("time_domain", 9.0, 1.0, 0.0, 0.0),
                BasebandRow::new("frequency_domain", 1.5, 2.0, 1.0, 0.0),
                BasebandRow::new("fec", 1.5, 1.0, 0.0, 1.0),
                BasebandRow::new("cpu", 10.0, 1.0, 0.0, 1.0),
                BasebandRow::new("cpri", 7.5, 1.0, 0.0, 1.0),
                BasebandRow::new("leakage", 3.0, 1.0, 0.0, 1.0),
            ],
            dc_loss: LossCurve::light_load(0.075),
            ac_loss: LossCurve::light_load(0.09),
            cooling_loss: 0.12,
            dc_max_output_w: None,
            ac_max_output_w: None,
        }
    }
}

/// Site consumption split by component (W).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PowerBreakdown {
    /// Power amplifiers.
    pub pa: f64,
    /// RF chains.
    pub rf: f64,
    /// Baseband processing.
    pub baseband: f64,
    /// DC-DC conversion loss.
    pub dc: f64,
    /// AC-DC conversion loss.
    pub ac: f64,
    /// Active cooling.
    pub cooling: f64,
    /// Sum of all components.
    pub total: f64,
}

impl PowerBreakdown {
    /// Component names and values in presentation order.
    pub fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("pa", self.pa),
            ("rf", self.rf),
            ("baseband", self.baseband),
            ("dc", self.dc),
            ("ac", self.ac),
            ("cooling", self.cooling),
            ("total", self.total),
        ]
    }
}

impl ComponentParams {
    /// Checks every parameter, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        if self.sectors == 0 {
            return Err(Error::invalid("sectors", "must be at least 1"));
        }
        if !(self.max_tx_power_w > 0.0 && self.max_tx_power_w.is_finite()) {
            return Err(Error::invalid("max_tx_power_w", "must be positive"));
        }
        if !(0.0..1.0).contains(&self.feeder_loss) {
            return Err(Error::invalid("feeder_loss", "must be in [0, 1)"));
        }
        for (key, value) in [
            ("pa_idle_w", self.pa_idle_w),
            ("pa_sleep_w", self.pa_sleep_w),
            ("rf_per_chain_w", self.rf_per_chain_w),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::invalid(key, "must be finite and >= 0"));
            }
        }
        if !(0.0..1.0).contains(&self.cooling_loss) {
            return Err(Error::invalid("cooling_loss", "must be in [0, 1)"));
        }
        self.pa_efficiency.validate("pa_efficiency")?;
        self.dc_loss.validate("dc_loss")?;
        self.ac_loss.validate("ac_loss")?;
        for row in &self.baseband {
            if !(row.reference_w >= 0.0 && row.reference_w.is_finite()) {
                return Err(Error::invalid(
                    "baseband",
                    "row powers must be finite and >= 0",
                ));
            }
            for exponent in [row.antenna_exponent, row.bandwidth_exponent] {
                if !(exponent >= 0.0 && exponent == libm::trunc(exponent)) {
                    return Err(Error::invalid(
                        "baseband",
                        "exponents must be non-negative integers",
                    ));
                }
            }
            if row.sleep_factor != 0.0 && row.sleep_factor != 1.0 {
                return Err(Error::invalid("baseband", "sleep factor must be 0 or 1"));
            }
        }
        for (key, value) in [
            ("dc_max_output_w", self.dc_max_output_w),
            ("ac_max_output_w", self.ac_max_output_w),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::invalid(key, "must be positive"));
                }
            }
        }
        Ok(())
    }

    fn pa_w(&self, antennas: f64, tx_power_w: f64, sleep: bool) -> Result<f64> {
        if sleep {
            return Ok(antennas * self.pa_sleep_w);
        }
        let per_pa_out = tx_power_w * (1.0 - self.feeder_loss) / antennas;
        if per_pa_out <= 0.0 {
            return Ok(antennas * self.pa_idle_w);
        }
        let eta = self.pa_efficiency.eval("pa_efficiency", per_pa_out)?;
        Ok(antennas * (self.pa_idle_w + per_pa_out / eta))
    }

    fn baseband_w(&self, antennas: f64, bandwidth_fraction: f64, sleep: bool) -> f64 {
        self.baseband
            .iter()
            .map(|row| {
                let active = row.reference_w
                    * libm::pow(antennas, row.antenna_exponent)
                    * libm::pow(bandwidth_fraction, row.bandwidth_exponent);
                if sleep {
                    active * row.sleep_factor
                } else {
                    active
                }
            })
            .sum()
    }

    /// Per-sector PA + RF + BB draw at full load for `antennas` chains.
    fn full_load_draw(&self, antennas: f64) -> Result<f64> {
        Ok(self.pa_w(antennas, self.max_tx_power_w, false)?
            + antennas * self.rf_per_chain_w
            + self.baseband_w(antennas, 1.0, false))
    }
}

/// Evaluates the component model.
///
/// `tx_power_w` is the sector RF output before feeder loss, `bandwidth_fraction`
/// the used share of the bandwidth in `[0, 1]`.
pub fn component_supply(
    params: &ComponentParams,
    antennas: u32,
    tx_power_w: f64,
    bandwidth_fraction: f64,
    sleep: bool,
) -> Result<PowerBreakdown> {
    params.validate()?;
    if antennas == 0 {
        return Err(Error::invalid("antennas", "must be at least 1"));
    }
    if !(tx_power_w >= 0.0 && tx_power_w <= params.max_tx_power_w * (1.0 + 1e-12)) {
        return Err(Error::invalid(
            "tx_power_w",
            "must be in [0, max_tx_power_w]",
        ));
    }
    if !(0.0..=1.0).contains(&bandwidth_fraction) {
        return Err(Error::invalid("bandwidth_fraction", "must be in [0, 1]"));
    }
    let d = f64::from(antennas);
    let pa = params.pa_w(d, tx_power_w, sleep)?;
    let rf = d * params.rf_per_chain_w;
    let baseband = params.baseband_w(d, bandwidth_fraction, sleep);
    let radio = pa + rf + baseband;

    let (dc_max, ac_max) = match (params.dc_max_output_w, params.ac_max_output_w) {
        (Some(dc), Some(ac)) => (dc, ac),
        (dc, ac) => {
            let full = params.full_load_draw(d)?;
            let full_dc = params.dc_loss.eval("dc_loss", 1.1)?;
            let dc_rated = dc.unwrap_or(1.1 * full);
            let ac_rated = ac.unwrap_or(1.1 * full * (1.0 + full_dc));
            (dc_rated, ac_rated)
        }
    };
    if radio <= 0.0 {
        return Err(Error::invalid(
            "baseband",
            "sector draws no power; conversion losses undefined",
        ));
    }
    let dc = params.dc_loss.eval("dc_loss", dc_max / radio)? * radio;
    let ac_input = radio + dc;
    let ac = params.ac_loss.eval("ac_loss", ac_max / ac_input)? * ac_input;
    let cooling = params.cooling_loss * (ac_input + ac);

    let sectors = f64::from(params.sectors);
    let mut breakdown = PowerBreakdown {
        pa: sectors * pa,
        rf: sectors * rf,
        baseband: sectors * baseband,
        dc: sectors * dc,
        ac: sectors * ac,
        cooling: sectors * cooling,
        total: 0.0,
    };
    breakdown.total = breakdown.pa
        + breakdown.rf
        + breakdown.baseband
        + breakdown.dc
        + breakdown.ac
        + breakdown.cooling;
    Ok(breakdown)
}
