//! Rate grids written as `start:stop:steps`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Spacing of the points of a [`RateGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    /// Equal steps.
    #[default]
    Linear,
    /// Equal ratios.
    Log,
}

/// Per-user target rates from `start_bps` to `stop_bps` in `steps` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RateGrid {
    /// First rate (bit/s).
    pub start_bps: f64,
    /// Last rate (bit/s).
    pub stop_bps: f64,
    /// Number of points.
    pub steps: usize,
}

impl Default for RateGrid {
    fn default() -> Self {
        Self {
            start_bps: 0.1e6,
            stop_bps: 15e6,
            steps: 30,
        }
    }
}

/// Parses a rate in bit/s. Accepts scientific notation and `k`, `M`, `G`
/// suffixes, e.g. `1.5M`, `500k`, `2e6`.
pub fn parse_rate(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let (number, scale) = match text.chars().last() {
        Some('k' | 'K') => (&text[..text.len() - 1], 1e3),
        Some('M') => (&text[..text.len() - 1], 1e6),
        Some('G') => (&text[..text.len() - 1], 1e9),
        _ => (text, 1.0),
    };
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a rate"))?;
    let rate = value * scale;
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(format!("`{text}` must be positive"));
    }
    Ok(rate)
}

impl RateGrid {
    /// Checks the grid.
    pub fn validate(&self) -> Result<(), String> {
        if self.steps == 0 {
            return Err(String::from("steps must be at least 1"));
        }
        if !(self.start_bps > 0.0 && self.start_bps.is_finite()) {
            return Err(String::from("start must be positive"));
        }
        if !(self.stop_bps >= self.start_bps && self.stop_bps.is_finite()) {
            return Err(String::from("stop must be finite and >= start"));
        }
        Ok(())
    }

    /// Grid points, first and last included.
    pub fn points(&self, spacing: Spacing) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start_bps];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                match spacing {
                    // One rounding step, so round-number grids stay exact.
                    Spacing::Linear => {
                        (self.start_bps * (last - i as f64) + self.stop_bps * i as f64) / last
                    }
                    Spacing::Log => self.start_bps * (self.stop_bps / self.start_bps).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for RateGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts[..] else {
            return Err(format!("`{s}` is not of the form start:stop:steps"));
        };
        let steps = steps
            .trim()
            .parse()
            .map_err(|_| format!("`{steps}` is not a step count"))?;
        let grid = RateGrid {
            start_bps: parse_rate(start)?,
            stop_bps: parse_rate(stop)?,
            steps,
        };
        grid.validate()?;
        Ok(grid)
    }
}

impl TryFrom<String> for RateGrid {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<RateGrid> for String {
    fn from(grid: RateGrid) -> String {
        grid.to_string()
    }
}

impl fmt::Display for RateGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start_bps, self.stop_bps, self.steps)
    }
}
