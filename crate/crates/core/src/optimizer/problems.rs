//! Problem builders for the single-antenna TDMA schemes and for the antenna
//! selection stage of the OFDMA allocator.

use alloc::vec::Vec;

use super::cost::UserCost;
use super::link::Link;
use super::solver::{ShareProblem, ShareSolution};
use crate::channel::FrameChannels;
use crate::error::Result;
use crate::powermodel::AffineParams;

/// Users with fixed channel gains sharing a single-antenna TDMA frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TdmaInstance<'a> {
    /// Channel power gain per user.
    pub gains: &'a [f64],
    /// Target rate per user (bit/s).
    pub rates: &'a [f64],
    /// Noise power over the system bandwidth (W).
    pub noise_w: f64,
    /// System bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Transmit power limit (W).
    pub max_tx_power_w: f64,
}

impl TdmaInstance<'_> {
    fn costs(&self, power: &AffineParams) -> Vec<UserCost> {
        self.gains
            .iter()
            .zip(self.rates)
            .map(|(&gain, &rate)| UserCost {
                rate_bps: rate,
                bandwidth_hz: self.bandwidth_hz,
                idle_w: power.idle_w,
                slope: power.slope,
                link: Link::single(self.noise_w, gain),
                max_tx_power_w: self.max_tx_power_w,
            })
            .collect()
    }

    /// Power control only: idle time costs as much as idle transmission.
    pub fn power_control(&self, power: &AffineParams) -> Result<ShareProblem> {
        ShareProblem::new(self.costs(power), power.idle_w)
    }

    /// Power control with a sleep mode for the unused share.
    pub fn with_sleep(&self, power: &AffineParams) -> Result<ShareProblem> {
        ShareProblem::new(self.costs(power), power.sleep_w)
    }
}

/// Inputs of the antenna-selecting share allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaSelection {
    /// Supply coefficients for one and two active antennas.
    pub power: [AffineParams; 2],
    /// Noise power over the system bandwidth (W).
    pub noise_w: f64,
    /// System bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Transmit power limit (W).
    pub max_tx_power_w: f64,
    /// Largest antenna count to consider.
    pub max_antennas: usize,
}

/// Result of the antenna-selecting share allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectedShares {
    /// Selected antenna count, `None` when both counts are infeasible.
    pub antennas: Option<usize>,
    /// Solution for each candidate antenna count (index `D - 1`).
    pub candidates: Vec<ShareSolution>,
}

impl SelectedShares {
    /// Solution for the selected antenna count.
    pub fn selected(&self) -> Option<&ShareSolution> {
        self.antennas.map(|d| &self.candidates[d - 1])
    }
}

impl AntennaSelection {
    /// Share problem with `antennas` active, using the channel of every user on
    /// block `(subcarrier, slot)` as representative of the frame.
    pub fn problem(
        &self,
        frame: &FrameChannels,
        block: (usize, usize),
        rates: &[f64],
        antennas: usize,
    ) -> Result<ShareProblem> {
        let power = &self.power[antennas - 1];
        let users = rates
            .iter()
            .enumerate()
            .map(|(k, &rate)| {
                let modes = frame.eigenmodes(k, block.0, block.1, antennas);
                let link = if modes.len() == 1 {
                    Link::single(self.noise_w, modes.get(0))
                } else {
                    Link::dual(self.noise_w, modes.get(0), modes.get(1))
                };
                UserCost {
                    rate_bps: rate,
                    bandwidth_hz: self.bandwidth_hz,
                    idle_w: power.idle_w,
                    slope: power.slope,
                    link,
                    max_tx_power_w: self.max_tx_power_w,
                }
            })
            .collect();
        ShareProblem::new(users, power.sleep_w)
    }

    /// Solves for every antenna count and keeps the cheapest feasible one;
    /// ties go to fewer antennas.
    pub fn solve(
        &self,
        frame: &FrameChannels,
        block: (usize, usize),
        rates: &[f64],
    ) -> Result<SelectedShares> {
        let max = self.max_antennas.min(frame.transmit_antennas()).max(1);
        let candidates = (1..=max)
            .map(|d| Ok(self.problem(frame, block, rates, d)?.solve()))
            .collect::<Result<Vec<ShareSolution>>>()?;
        let mut antennas = None;
        let mut best = f64::INFINITY;
        for (i, sol) in candidates.iter().enumerate() {
            if sol.is_feasible() && sol.objective < best {
                best = sol.objective;
                antennas = Some(i + 1);
            }
        }
        Ok(SelectedShares {
            antennas,
            candidates,
        })
    }
}
