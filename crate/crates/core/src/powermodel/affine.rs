//! Affine load-dependent supply model.

use crate::error::{Error, Result};

/// Per-sector coefficients of the affine model.
///
/// Active consumption at RF output `p` is `idle_w + slope * p`; a sleeping
/// sector draws `sleep_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct AffineParams {
    /// Active power at zero RF output (W).
    pub idle_w: f64,
    /// Load-dependent slope (W per W of RF output).
    pub slope: f64,
    /// Sleep-mode power (W).
    pub sleep_w: f64,
    /// Maximum RF output power (W).
    pub max_tx_power_w: f64,
    /// Number of sectors served by the site.
    pub sectors: u32,
}

impl AffineParams {
    /// Builds a model from its idle, full-load and sleep levels.
    ///
    /// `full_w` must equal `idle_w + slope * max_tx_power_w`.
    pub fn new(
        idle_w: f64,
        full_w: f64,
        sleep_w: f64,
        slope: f64,
        max_tx_power_w: f64,
        sectors: u32,
    ) -> Result<Self> {
        let params = Self {
            idle_w,
            slope,
            sleep_w,
            max_tx_power_w,
            sectors,
        };
        params.validate()?;
        let implied = params.full_load_w();
        if (implied - full_w).abs() > 1e-9 * implied.abs().max(1.0) {
            return Err(Error::invalid(
                "full_w",
                "full-load power must equal idle_w + slope * max_tx_power_w",
            ));
        }
        Ok(params)
    }

    /// LTE macro site with `antennas` transmit chains per sector (1 or 2).
    pub fn macro_site(antennas: u32) -> Result<Self> {
        let (idle_w, sleep_w) = match antennas {
            1 => (186.0, 107.0),
            2 => (292.0, 216.0),
            _ => {
                return Err(Error::invalid(
                    "antennas",
                    "macro presets exist for 1 or 2 antennas",
                ))
            }
        };
        Ok(Self {
            idle_w,
            slope: 4.2,
            sleep_w,
            max_tx_power_w: 40.0,
            sectors: 3,
        })
    }

    /// Single sector of [`AffineParams::macro_site`].
    pub fn macro_sector(antennas: u32) -> Result<Self> {
        Ok(Self {
            sectors: 1,
            ..Self::macro_site(antennas)?
        })
    }

    /// Single-sector model with a deep sleep mode and a shallow slope.
    pub fn deep_sleep_sector() -> Self {
        Self {
            idle_w: 170.0,
            slope: 3.4,
            sleep_w: 10.0,
            max_tx_power_w: 40.0,
            sectors: 1,
        }
    }

    /// Single-sector model dominated by transmit power.
    pub fn transmit_dominated_sector() -> Self {
        Self {
            idle_w: 1.0,
            slope: 8.8,
            sleep_w: 1.0,
            max_tx_power_w: 40.0,
            sectors: 1,
        }
    }

    /// Per-sector consumption at full load.
    pub fn full_load_w(&self) -> f64 {
        self.idle_w + self.slope * self.max_tx_power_w
    }

    /// Fraction of the full-load consumption that scales with load.
    pub fn load_dependence(&self) -> f64 {
        let dynamic = self.slope * self.max_tx_power_w;
        if dynamic == 0.0 {
            return 0.0;
        }
        dynamic / self.full_load_w()
    }

    /// Per-sector consumption while transmitting `tx_power_w`.
    pub fn active_w(&self, tx_power_w: f64) -> f64 {
        self.idle_w + self.slope * tx_power_w
    }

    /// Checks that the coefficients are physically meaningful.
    pub fn validate(&self) -> Result<()> {
        if !(self.idle_w >= 0.0 && self.idle_w.is_finite()) {
            return Err(Error::invalid("idle_w", "must be finite and >= 0"));
        }
        if !(self.slope >= 0.0 && self.slope.is_finite()) {
            return Err(Error::invalid("slope", "must be finite and >= 0"));
        }
        if !(self.sleep_w >= 0.0 && self.sleep_w.is_finite()) {
            return Err(Error::invalid("sleep_w", "must be finite and >= 0"));
        }
        if !(self.max_tx_power_w > 0.0 && self.max_tx_power_w.is_finite()) {
            return Err(Error::invalid("max_tx_power_w", "must be positive"));
        }
        if self.sectors == 0 {
            return Err(Error::invalid("sectors", "must be at least 1"));
        }
        if self.sleep_w > self.idle_w {
            return Err(Error::invalid("sleep_w", "must not exceed idle_w"));
        }
        Ok(())
    }
}

/// Site supply power at relative load `load` in `[0, 1]`.
///
/// Zero load means the site sleeps.
pub fn affine_supply(params: &AffineParams, load: f64) -> Result<f64> {
    params.validate()?;
    if !(0.0..=1.0).contains(&load) {
        return Err(Error::invalid("load", "must be in [0, 1]"));
    }
    let sectors = f64::from(params.sectors);
    if load == 0.0 {
        return Ok(sectors * params.sleep_w);
    }
    Ok(sectors * (params.full_load_w() + params.slope * params.max_tx_power_w * (load - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn macro_values() {
        let one = AffineParams::macro_site(1).unwrap();
        let two = AffineParams::macro_site(2).unwrap();
        assert_eq!(affine_supply(&one, 1.0).unwrap(), 1062.0);
        assert_eq!(affine_supply(&one, 0.0).unwrap(), 321.0);
        assert_eq!(affine_supply(&two, 1.0).unwrap(), 1380.0);
        assert_eq!(affine_supply(&two, 0.0).unwrap(), 648.0);
        assert!((two.load_dependence() - 168.0 / 460.0).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_levels_are_rejected() {
        assert!(AffineParams::new(186.0, 354.0, 107.0, 4.2, 40.0, 3).is_ok());
        assert!(AffineParams::new(186.0, 360.0, 107.0, 4.2, 40.0, 3).is_err());
        assert!(AffineParams::new(186.0, 354.0, 200.0, 4.2, 40.0, 3).is_err());
    }

    #[test]
    fn load_dependence_limits() {
        let mut p = AffineParams::macro_sector(2).unwrap();
        p.slope = 0.0;
        assert_eq!(p.load_dependence(), 0.0);
        p.slope = 4.2;
        p.idle_w = 0.0;
        assert_eq!(p.load_dependence(), 1.0);
    }

    #[test]
    fn rejects_bad_load() {
        let p = AffineParams::macro_site(1).unwrap();
        assert!(affine_supply(&p, 1.5).is_err());
        assert!(affine_supply(&p, -0.1).is_err());
        assert!(AffineParams::macro_site(3).is_err());
    }
}
