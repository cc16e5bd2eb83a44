//! Lookup curves used by the component model.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Piecewise-linear curve through sorted `(x, y)` points.
///
/// Evaluation outside `[x_first, x_last]` is an error; the curve never
/// extrapolates.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// Builds a curve; abscissae must be finite and strictly increasing.
    pub fn new(key: &str, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid(key, "curve needs at least one point"));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::invalid(key, format!("point {i} is not finite")));
            }
            if i > 0 && x <= points[i - 1].0 {
                return Err(Error::invalid(
                    key,
                    format!("abscissae must be strictly increasing (point {i})"),
                ));
            }
        }
        Ok(Self { points })
    }

    /// The tabulated points.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Domain `[min, max]` of the curve.
    pub fn domain(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Linear interpolation at `x`.
    pub fn eval(&self, name: &str, x: f64) -> Result<f64> {
        let (min, max) = self.domain();
        if !(x >= min && x <= max) {
            return Err(Error::OutOfDomain {
                curve: String::from(name),
                value: x,
                min,
                max,
            });
        }
        let upper = self.points.partition_point(|&(px, _)| px < x);
        if upper == 0 {
            return Ok(self.points[0].1);
        }
        let (x1, y1) = self.points[upper];
        let (x0, y0) = self.points[upper - 1];
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

/// Relative loss of a power-conversion stage as a function of the ratio
/// `zeta = rated output / actual draw` (so `zeta >= 1` when not overloaded).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum LossCurve {
    /// `loss(zeta) = reference_loss * (zeta / reference_ratio)^exponent` on
    /// `[min_ratio, max_ratio]`.
    PowerLaw {
        /// Loss at `reference_ratio`.
        reference_loss: f64,
        /// Ratio at which the reference loss applies.
        reference_ratio: f64,
        /// Growth exponent of the loss at light load.
        exponent: f64,
        /// Smallest accepted ratio.
        min_ratio: f64,
        /// Largest accepted ratio.
        max_ratio: f64,
    },
    /// Tabulated `(zeta, loss)` points.
    Table(PiecewiseLinear),
}

impl LossCurve {
    /// Default light-load curve: `sigma` at the rated operating point
    /// `zeta = 1.1`, growing with the fourth root of the under-utilization.
    pub fn light_load(sigma: f64) -> Self {
        LossCurve::PowerLaw {
            reference_loss: sigma,
            reference_ratio: 1.1,
            exponent: 0.25,
            min_ratio: 1.0,
            max_ratio: 1000.0,
        }
    }

    /// Loss fraction at `zeta`.
    pub fn eval(&self, name: &str, zeta: f64) -> Result<f64> {
        match self {
            LossCurve::PowerLaw {
                reference_loss,
                reference_ratio,
                exponent,
                min_ratio,
                max_ratio,
            } => {
                if !(zeta >= *min_ratio && zeta <= *max_ratio) {
                    return Err(Error::OutOfDomain {
                        curve: String::from(name),
                        value: zeta,
                        min: *min_ratio,
                        max: *max_ratio,
                    });
                }
                Ok(reference_loss * libm::pow(zeta / reference_ratio, *exponent))
            }
            LossCurve::Table(table) => table.eval(name, zeta),
        }
    }

    /// Checks the parameters; `key` names the curve in errors.
    pub fn validate(&self, key: &str) -> Result<()> {
        match self {
            LossCurve::PowerLaw {
                reference_loss,
                reference_ratio,
                exponent,
                min_ratio,
                max_ratio,
            } => {
                if !(*reference_loss >= 0.0 && *reference_loss < 1.0) {
                    return Err(Error::invalid(key, "reference loss must be in [0, 1)"));
                }
                if !(*reference_ratio > 0.0 && exponent.is_finite()) {
                    return Err(Error::invalid(key, "reference ratio must be positive"));
                }
                if !(*min_ratio > 0.0 && max_ratio > min_ratio) {
                    return Err(Error::invalid(key, "ratio domain must be non-empty"));
                }
                Ok(())
            }
            LossCurve::Table(table) => {
                if table
                    .points()
                    .iter()
                    .any(|&(_, y)| !(0.0..1.0).contains(&y))
                {
                    return Err(Error::invalid(key, "losses must be in [0, 1)"));
                }
                Ok(())
            }
        }
    }
}

/// Power-amplifier efficiency as a function of per-PA output power (W).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum EfficiencyCurve {
    /// `eta(p) = max_efficiency * (1 - slope * log2(limit_w / p))`, clipped to
    /// `[min_efficiency, max_efficiency]`.
    LogHeuristic {
        /// Peak efficiency.
        max_efficiency: f64,
        /// Efficiency drop per halving of output power.
        slope: f64,
        /// Output power at which the peak is reached.
        limit_w: f64,
        /// Lower clip.
        min_efficiency: f64,
    },
    /// Tabulated `(output W, efficiency)` points.
    Table(PiecewiseLinear),
}

impl EfficiencyCurve {
    /// Efficiency at per-PA output `output_w`.
    pub fn eval(&self, name: &str, output_w: f64) -> Result<f64> {
        match self {
            EfficiencyCurve::LogHeuristic {
                max_efficiency,
                slope,
                limit_w,
                min_efficiency,
            } => {
                if output_w <= 0.0 {
                    return Ok(*min_efficiency);
                }
                let eta = max_efficiency * (1.0 - slope * libm::log2(limit_w / output_w));
                Ok(eta.clamp(*min_efficiency, *max_efficiency))
            }
            EfficiencyCurve::Table(table) => table.eval(name, output_w),
        }
    }

    /// Checks the parameters; `key` names the curve in errors.
    pub fn validate(&self, key: &str) -> Result<()> {
        match self {
            EfficiencyCurve::LogHeuristic {
                max_efficiency,
                slope,
                limit_w,
                min_efficiency,
            } => {
                if !(*min_efficiency > 0.0
                    && min_efficiency <= max_efficiency
                    && *max_efficiency <= 1.0)
                {
                    return Err(Error::invalid(
                        key,
                        "need 0 < min_efficiency <= max_efficiency <= 1",
                    ));
                }
                if !(*slope >= 0.0 && *limit_w > 0.0) {
                    return Err(Error::invalid(key, "slope must be >= 0 and limit positive"));
                }
                Ok(())
            }
            EfficiencyCurve::Table(table) => {
                let points = table.points();
                if points.iter().any(|&(_, y)| !(y > 0.0 && y <= 1.0)) {
                    return Err(Error::invalid(key, "efficiencies must be in (0, 1]"));
                }
                if points.windows(2).any(|w| w[1].1 < w[0].1) {
                    return Err(Error::invalid(
                        key,
                        "efficiency must be non-decreasing in output power",
                    ));
                }
                Ok(())
            }
        }
    }
}
