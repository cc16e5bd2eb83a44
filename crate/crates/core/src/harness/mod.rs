//! Per-trial evaluation of every scheme and aggregation over trials.
//!
//! Two channel families are simulated:
//!
//! * [`Family::Tdma`]: single-antenna users with flat channels sharing the
//!   frame in time. Schemes: BA, DTX, PC, PRAIS.
//! * [`Family::Ofdma`]: MIMO users on the subcarrier/slot grid. Schemes: BA,
//!   DTX, RAPS.
//!
//! Drivers draw a [`TrialChannels`] per trial and evaluate every requested
//! scheme on it, so comparisons between schemes are paired.

mod benchmarks;
mod stats;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

pub use benchmarks::{
    ofdma_ba, ofdma_ba_with, ofdma_dtx, ofdma_dtx_with, tdma_ba, tdma_dtx, BenchmarkFrame,
};
pub use stats::{aggregate, PointStats, INCLUSION_OUTAGE_LIMIT};

use crate::channel::{FrameChannels, Scenario, UserDrop};
use crate::error::{Error, Result};
use crate::optimizer::{AntennaSelection, TdmaInstance};
use crate::powermodel::AffineParams;
use crate::raps::allocate_frame;

/// Allocation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Scheme {
    /// Bandwidth adaptation.
    Ba,
    /// Discontinuous transmission.
    Dtx,
    /// Power control without sleep.
    Pc,
    /// Power control with sleep.
    Prais,
    /// Antenna selection, power control and sleep on the OFDMA grid.
    Raps,
}

impl Scheme {
    /// Every scheme.
    pub const ALL: [Scheme; 5] = [
        Scheme::Ba,
        Scheme::Dtx,
        Scheme::Pc,
        Scheme::Prais,
        Scheme::Raps,
    ];

    /// Lower-case identifier.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ba => "ba",
            Scheme::Dtx => "dtx",
            Scheme::Pc => "pc",
            Scheme::Prais => "prais",
            Scheme::Raps => "raps",
        }
    }

    /// Whether the scheme can run on `family`.
    pub fn supports(self, family: Family) -> bool {
        match self {
            Scheme::Ba | Scheme::Dtx => true,
            Scheme::Pc | Scheme::Prais => family == Family::Tdma,
            Scheme::Raps => family == Family::Ofdma,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid("schemes", alloc::format!("unknown scheme `{s}`")))
    }
}

/// Channel family of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Family {
    /// Flat single-antenna channels, time sharing.
    Tdma,
    /// MIMO channels on the OFDMA grid.
    Ofdma,
}

/// Outcome of one scheme on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// Scheme evaluated.
    pub scheme: Scheme,
    /// Average supply power (W); infinite on outage.
    pub supply_w: f64,
    /// The scheme could not serve every user (includes power violations).
    pub outage: bool,
    /// A slot exceeded the transmit power limit.
    pub violation: bool,
    /// Rate delivered to each user (bit/s).
    pub achieved_rate_bps: Vec<f64>,
    /// Active antennas, where the scheme chooses them.
    pub antennas: Option<usize>,
    /// Sleep slots, where the scheme sleeps in whole slots.
    pub sleep_slots: Option<usize>,
}

impl TrialOutcome {
    fn outage(scheme: Scheme, users: usize) -> Self {
        Self {
            scheme,
            supply_w: f64::INFINITY,
            outage: true,
            violation: false,
            achieved_rate_bps: alloc::vec![0.0; users],
            antennas: None,
            sleep_slots: None,
        }
    }

    fn served(scheme: Scheme, supply_w: f64, rates: &[f64]) -> Self {
        Self {
            scheme,
            supply_w,
            outage: false,
            violation: false,
            achieved_rate_bps: rates.to_vec(),
            antennas: None,
            sleep_slots: None,
        }
    }

    fn from_supply(scheme: Scheme, supply_w: Option<f64>, rates: &[f64]) -> Self {
        match supply_w {
            Some(s) if s.is_finite() => Self::served(scheme, s, rates),
            _ => Self::outage(scheme, rates.len()),
        }
    }
}

/// Random state of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialChannels {
    /// User positions and large-scale gains.
    pub drop: UserDrop,
    /// Small-scale channels, present for the OFDMA family.
    pub frame: Option<FrameChannels>,
}

impl TrialChannels {
    /// Draws users and, for the OFDMA family, their frame channels.
    pub fn sample<R: Rng + ?Sized>(scenario: &Scenario, family: Family, rng: &mut R) -> Self {
        let drop = UserDrop::sample(scenario, rng);
        let frame = match family {
            Family::Tdma => None,
            Family::Ofdma => Some(FrameChannels::sample(scenario, &drop.gain, rng)),
        };
        Self { drop, frame }
    }
}

/// Power models used by the evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemePower {
    /// Single-antenna supply model of the TDMA family.
    pub tdma: AffineParams,
    /// Supply models for one and two antennas in the OFDMA family.
    pub ofdma: [AffineParams; 2],
}

impl Default for SchemePower {
    fn default() -> Self {
        let one = AffineParams::macro_sector(1).expect("preset");
        let two = AffineParams {
            sleep_w: one.sleep_w,
            ..AffineParams::macro_sector(2).expect("preset")
        };
        Self {
            tdma: one,
            ofdma: [one, two],
        }
    }
}

/// Evaluates `schemes` on one trial where every user asks for `rate_bps`.
///
/// Outcomes are returned in the order of `schemes`. Schemes that do not
/// support the trial's family report an outage.
pub fn evaluate_trial(
    scenario: &Scenario,
    power: &SchemePower,
    channels: &TrialChannels,
    rate_bps: f64,
    schemes: &[Scheme],
) -> Vec<TrialOutcome> {
    let users = channels.drop.gain.len();
    let rates: Vec<f64> = alloc::vec![rate_bps; users];
    match &channels.frame {
        None => {
            let instance = TdmaInstance {
                gains: &channels.drop.gain,
                rates: &rates,
                noise_w: scenario.noise_w(),
                bandwidth_hz: scenario.bandwidth_hz,
                max_tx_power_w: scenario.max_tx_power_w,
            };
            let optimized = |scheme: Scheme, problem: Result<crate::optimizer::ShareProblem>| {
                let supply = problem
                    .ok()
                    .map(|p| p.solve())
                    .filter(|s| s.is_feasible())
                    .map(|s| s.objective);
                TrialOutcome::from_supply(scheme, supply, &rates)
            };
            schemes
                .iter()
                .map(|&scheme| match scheme {
                    Scheme::Ba => {
                        TrialOutcome::from_supply(scheme, tdma_ba(&instance, &power.tdma), &rates)
                    }
                    Scheme::Dtx => {
                        TrialOutcome::from_supply(scheme, tdma_dtx(&instance, &power.tdma), &rates)
                    }
                    Scheme::Pc => optimized(scheme, instance.power_control(&power.tdma)),
                    Scheme::Prais => optimized(scheme, instance.with_sleep(&power.tdma)),
                    Scheme::Raps => TrialOutcome::outage(scheme, users),
                })
                .collect()
        }
        Some(frame) => {
            let bench = |scheme: Scheme, result: Option<BenchmarkFrame>| match result {
                Some(b) => TrialOutcome {
                    antennas: Some(b.antennas),
                    sleep_slots: Some(b.sleep_slots),
                    ..TrialOutcome::served(scheme, b.supply_w, &rates)
                },
                None => TrialOutcome::outage(scheme, users),
            };
            schemes
                .iter()
                .map(|&scheme| match scheme {
                    Scheme::Ba => bench(scheme, ofdma_ba(scenario, frame, &rates, &power.ofdma)),
                    Scheme::Dtx => bench(scheme, ofdma_dtx(scenario, frame, &rates, &power.ofdma)),
                    Scheme::Raps => {
                        let selection = AntennaSelection {
                            power: power.ofdma,
                            noise_w: scenario.noise_w(),
                            bandwidth_hz: scenario.bandwidth_hz,
                            max_tx_power_w: scenario.max_tx_power_w,
                            max_antennas: scenario.max_transmit_antennas,
                        };
                        let alloc = allocate_frame(scenario, frame, &rates, &selection);
                        TrialOutcome {
                            scheme,
                            supply_w: if alloc.is_outage() {
                                f64::INFINITY
                            } else {
                                alloc.supply_w
                            },
                            outage: alloc.is_outage(),
                            violation: alloc.power_violation,
                            antennas: alloc.antennas,
                            sleep_slots: Some(alloc.sleep_slots),
                            achieved_rate_bps: alloc.achieved_rate_bps,
                        }
                    }
                    Scheme::Pc | Scheme::Prais => TrialOutcome::outage(scheme, users),
                })
                .collect()
        }
    }
}
