//! Reference schemes that do not optimize transmit power.
//!
//! * Bandwidth adaptation (BA) transmits only on the resources it needs, at
//!   full power spectral density, and never sleeps.
//! * Discontinuous transmission (DTX) transmits at full power on as few slots
//!   as possible and sleeps for the rest of the frame.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{FrameChannels, Scenario};
use crate::optimizer::TdmaInstance;
use crate::powermodel::AffineParams;

/// Time shares each user needs at full transmit power.
fn full_power_shares(instance: &TdmaInstance<'_>) -> f64 {
    instance
        .gains
        .iter()
        .zip(instance.rates)
        .map(|(&g, &r)| {
            if r <= 0.0 {
                0.0
            } else {
                let snr = g * instance.max_tx_power_w / instance.noise_w;
                r / (instance.bandwidth_hz * libm::log2(1.0 + snr))
            }
        })
        .sum()
}

/// TDMA discontinuous transmission: full power while serving, sleep otherwise.
/// Returns `None` when the users need more than the whole frame.
pub fn tdma_dtx(instance: &TdmaInstance<'_>, power: &AffineParams) -> Option<f64> {
    let busy = full_power_shares(instance);
    (busy <= 1.0).then(|| power.sleep_w + (power.full_load_w() - power.sleep_w) * busy)
}

/// TDMA bandwidth adaptation: full power while serving, idle otherwise.
pub fn tdma_ba(instance: &TdmaInstance<'_>, power: &AffineParams) -> Option<f64> {
    let busy = full_power_shares(instance);
    (busy <= 1.0).then_some(power.idle_w + power.slope * power.max_tx_power_w * busy)
}

/// Result of an OFDMA benchmark frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkFrame {
    /// Active antennas used.
    pub antennas: usize,
    /// Average supply power (W).
    pub supply_w: f64,
    /// Slots spent asleep.
    pub sleep_slots: usize,
}

/// Bits user `k` carries on block `(n, t)` at full power spectral density
/// split equally over the `antennas` streams.
fn full_psd_bits(
    scenario: &Scenario,
    frame: &FrameChannels,
    k: usize,
    n: usize,
    t: usize,
    antennas: usize,
) -> f64 {
    let symbols = scenario.subcarrier_bandwidth_hz * scenario.slot_duration_s;
    let per_stream = scenario.max_tx_power_w / (scenario.subcarriers * antennas) as f64;
    let noise = scenario.subcarrier_noise_w();
    frame
        .eigenmodes(k, n, t, antennas)
        .as_slice()
        .iter()
        .map(|&e| symbols * libm::log2(1.0 + per_stream * e / noise))
        .sum()
}

fn bit_table(
    scenario: &Scenario,
    frame: &FrameChannels,
    users: usize,
    antennas: usize,
) -> Vec<Vec<f64>> {
    (0..users)
        .map(|k| {
            let mut row = Vec::with_capacity(scenario.blocks());
            for t in 0..scenario.slots {
                for n in 0..scenario.subcarriers {
                    row.push(full_psd_bits(scenario, frame, k, n, t, antennas));
                }
            }
            row
        })
        .collect()
}

/// Picks the cheapest feasible antenna count; ties go to fewer antennas.
fn cheapest(candidates: impl Iterator<Item = Option<BenchmarkFrame>>) -> Option<BenchmarkFrame> {
    let mut best: Option<BenchmarkFrame> = None;
    for c in candidates.flatten() {
        if best.is_none_or(|b| c.supply_w < b.supply_w) {
            best = Some(c);
        }
    }
    best
}

/// OFDMA bandwidth adaptation for one antenna count.
pub fn ofdma_ba_with(
    scenario: &Scenario,
    frame: &FrameChannels,
    rates: &[f64],
    power: &AffineParams,
    antennas: usize,
) -> Option<BenchmarkFrame> {
    let users = rates.len();
    let n_sub = scenario.subcarriers;
    let bits = bit_table(scenario, frame, users, antennas);
    let mut remaining: Vec<f64> = rates
        .iter()
        .map(|r| r * scenario.frame_duration_s)
        .collect();
    let preference: Vec<Vec<usize>> = bits
        .iter()
        .map(|row| {
            let mut idx: Vec<usize> = (0..row.len()).collect();
            idx.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
            idx
        })
        .collect();
    let mut cursor = vec![0usize; users];
    let mut taken = vec![false; scenario.blocks()];
    let mut used_per_slot = vec![0usize; scenario.slots];
    loop {
        let mut progressed = false;
        for k in 0..users {
            if remaining[k] <= 0.0 {
                continue;
            }
            while cursor[k] < preference[k].len() && taken[preference[k][cursor[k]]] {
                cursor[k] += 1;
            }
            let &block = preference[k].get(cursor[k])?;
            taken[block] = true;
            used_per_slot[block / n_sub] += 1;
            remaining[k] -= bits[k][block];
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let per_block = scenario.max_tx_power_w / n_sub as f64;
    let slot_power: Vec<f64> = used_per_slot
        .iter()
        .map(|&u| u as f64 * per_block)
        .collect();
    Some(BenchmarkFrame {
        antennas,
        supply_w: crate::raps::frame_supply(power, &slot_power, 0),
        sleep_slots: 0,
    })
}

/// OFDMA discontinuous transmission for one antenna count.
pub fn ofdma_dtx_with(
    scenario: &Scenario,
    frame: &FrameChannels,
    rates: &[f64],
    power: &AffineParams,
    antennas: usize,
) -> Option<BenchmarkFrame> {
    let users = rates.len();
    let bits = bit_table(scenario, frame, users, antennas);
    let mut remaining: Vec<f64> = rates
        .iter()
        .map(|r| r * scenario.frame_duration_s)
        .collect();
    let mut active_slots = 0;
    for t in 0..scenario.slots {
        if remaining.iter().all(|&b| b <= 0.0) {
            break;
        }
        active_slots = t + 1;
        for n in 0..scenario.subcarriers {
            let block = t * scenario.subcarriers + n;
            let best =
                (0..users)
                    .filter(|&k| remaining[k] > 0.0)
                    .fold(None, |acc: Option<usize>, k| match acc {
                        Some(b) if bits[b][block] >= bits[k][block] => Some(b),
                        _ => Some(k),
                    });
            match best {
                Some(k) => remaining[k] -= bits[k][block],
                None => break,
            }
        }
    }
    if remaining.iter().any(|&b| b > 0.0) {
        return None;
    }
    let slots = scenario.slots as f64;
    let sleep_slots = scenario.slots - active_slots;
    let supply_w =
        (active_slots as f64 * power.full_load_w() + sleep_slots as f64 * power.sleep_w) / slots;
    Some(BenchmarkFrame {
        antennas,
        supply_w,
        sleep_slots,
    })
}

/// OFDMA bandwidth adaptation with the cheaper antenna count.
pub fn ofdma_ba(
    scenario: &Scenario,
    frame: &FrameChannels,
    rates: &[f64],
    power: &[AffineParams; 2],
) -> Option<BenchmarkFrame> {
    let max = scenario
        .max_transmit_antennas
        .min(frame.transmit_antennas());
    cheapest((1..=max).map(|d| ofdma_ba_with(scenario, frame, rates, &power[d - 1], d)))
}

/// OFDMA discontinuous transmission with the cheaper antenna count.
pub fn ofdma_dtx(
    scenario: &Scenario,
    frame: &FrameChannels,
    rates: &[f64],
    power: &[AffineParams; 2],
) -> Option<BenchmarkFrame> {
    let max = scenario
        .max_transmit_antennas
        .min(frame.transmit_antennas());
    cheapest((1..=max).map(|d| ofdma_dtx_with(scenario, frame, rates, &power[d - 1], d)))
}
