//! Full OFDMA frame allocation: antenna selection and time shares, then
//! block quantization, subcarrier assignment and water-filling.

use alloc::vec;
use alloc::vec::Vec;

use super::assign::assign_subcarriers;
use super::quantize::{quantize, split_over_slots, BlockCounts};
use super::waterfill::{water_fill, SubChannel};
use crate::channel::{FrameChannels, Scenario};
use crate::optimizer::AntennaSelection;
use crate::powermodel::AffineParams;

/// Outcome of allocating one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameAllocation {
    /// Active transmit antennas, `None` when the first stage was infeasible.
    pub antennas: Option<usize>,
    /// Sleep slots at the end of the frame.
    pub sleep_slots: usize,
    /// Resource blocks per user.
    pub blocks: Vec<usize>,
    /// Owner of every subcarrier in every active slot, `owner[slot][n]`.
    pub owner: Vec<Vec<usize>>,
    /// Transmit power of each slot (zero while asleep) (W).
    pub slot_tx_power_w: Vec<f64>,
    /// Average supply power over the frame (W).
    pub supply_w: f64,
    /// Objective of the continuous first stage (W).
    pub stage_one_w: f64,
    /// Rate each user actually receives (bit/s).
    pub achieved_rate_bps: Vec<f64>,
    /// Every user with a positive target got blocks and a finite power.
    pub feasible: bool,
    /// Some slot exceeds the transmit power limit.
    pub power_violation: bool,
}

impl FrameAllocation {
    /// Infeasible or over the power limit.
    pub fn is_outage(&self) -> bool {
        !self.feasible || self.power_violation
    }
}

/// Average supply power of a frame whose active slots transmit
/// `slot_tx_power_w` and which then sleeps for `sleep_slots` slots.
pub fn frame_supply(power: &AffineParams, slot_tx_power_w: &[f64], sleep_slots: usize) -> f64 {
    let slots = slot_tx_power_w.len() + sleep_slots;
    let active: f64 = slot_tx_power_w.iter().map(|&p| power.active_w(p)).sum();
    (active + sleep_slots as f64 * power.sleep_w) / slots as f64
}

/// Allocates one frame.
pub fn allocate_frame(
    scenario: &Scenario,
    frame: &FrameChannels,
    rates: &[f64],
    selection: &AntennaSelection,
) -> FrameAllocation {
    let users = rates.len();
    let slots = scenario.slots;
    if rates.iter().all(|&r| r <= 0.0) {
        return FrameAllocation {
            antennas: Some(1),
            sleep_slots: slots,
            blocks: vec![0; users],
            owner: Vec::new(),
            slot_tx_power_w: vec![0.0; slots],
            supply_w: selection.power[0].sleep_w,
            stage_one_w: selection.power[0].sleep_w,
            achieved_rate_bps: vec![0.0; users],
            feasible: true,
            power_violation: false,
        };
    }

    let stage_one = selection.solve(frame, scenario.center_block(), rates);
    let Some(solution) = stage_one.as_ref().ok().and_then(|s| s.selected()) else {
        return FrameAllocation {
            antennas: None,
            sleep_slots: 0,
            blocks: vec![0; users],
            owner: Vec::new(),
            slot_tx_power_w: vec![0.0; slots],
            supply_w: f64::INFINITY,
            stage_one_w: f64::INFINITY,
            achieved_rate_bps: vec![0.0; users],
            feasible: false,
            power_violation: false,
        };
    };
    let antennas = stage_one
        .as_ref()
        .ok()
        .and_then(|s| s.antennas)
        .expect("selected solution has an antenna count");
    let power = &selection.power[antennas - 1];

    let BlockCounts {
        blocks,
        sleep_slots,
    } = quantize(
        &solution.shares,
        solution.sleep_share,
        scenario.subcarriers,
        slots,
    )
    .expect("solver shares are finite and non-negative");
    let active_slots = slots - sleep_slots;
    let per_slot = split_over_slots(&blocks, scenario.subcarriers, active_slots)
        .expect("quantization fills the active slots");

    let mut owner = Vec::with_capacity(active_slots);
    for (t, targets) in per_slot.iter().enumerate() {
        let quality: Vec<Vec<f64>> = (0..users)
            .map(|k| {
                (0..scenario.subcarriers)
                    .map(|n| frame.quality(k, n, t, antennas))
                    .collect()
            })
            .collect();
        owner.push(assign_subcarriers(&quality, targets));
    }

    let mut slot_tx_power_w = vec![0.0; active_slots];
    let mut achieved_rate_bps = vec![0.0; users];
    let mut feasible = true;
    for k in 0..users {
        if rates[k] <= 0.0 {
            continue;
        }
        let mut channels = Vec::new();
        for (t, slot_owner) in owner.iter().enumerate() {
            for (n, &o) in slot_owner.iter().enumerate() {
                if o == k {
                    for &gain in frame.eigenmodes(k, n, t, antennas).as_slice() {
                        channels.push(SubChannel { gain, slot: t });
                    }
                }
            }
        }
        let target_bits = rates[k] * scenario.frame_duration_s;
        match water_fill(
            &channels,
            target_bits,
            scenario.subcarrier_bandwidth_hz,
            scenario.slot_duration_s,
            scenario.subcarrier_noise_w(),
        ) {
            Some(wf) if wf.power_w.iter().all(|p| p.is_finite()) => {
                for (ch, &p) in channels.iter().zip(&wf.power_w) {
                    slot_tx_power_w[ch.slot] += p;
                }
                achieved_rate_bps[k] = wf.total_bits() / scenario.frame_duration_s;
            }
            _ => feasible = false,
        }
    }

    let limit = selection.max_tx_power_w * (1.0 + 1e-9);
    let power_violation = slot_tx_power_w.iter().any(|&p| p > limit);
    let supply_w = frame_supply(power, &slot_tx_power_w, sleep_slots);
    slot_tx_power_w.resize(slots, 0.0);
    FrameAllocation {
        antennas: Some(antennas),
        sleep_slots,
        blocks,
        owner,
        slot_tx_power_w,
        supply_w,
        stage_one_w: solution.objective,
        achieved_rate_bps,
        feasible,
        power_violation,
    }
}
