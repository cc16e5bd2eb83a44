//! Conversion of continuous shares into whole resource blocks.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Integer resource counts for one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCounts {
    /// Resource blocks per user.
    pub blocks: Vec<usize>,
    /// Slots at the end of the frame during which the station sleeps.
    pub sleep_slots: usize,
}

/// Rounds user shares up to whole blocks and the sleep share down to whole
/// slots, keeping one slot's worth of slack per user so the user counts fit.
///
/// When the sleep share cannot cover that slack, user shares are rounded down
/// instead and nobody sleeps. Blocks left over go round-robin to users with a
/// positive share (to everyone if no share is positive), so that
/// `sum(blocks) + subcarriers * sleep_slots == subcarriers * slots` always.
pub fn quantize(
    shares: &[f64],
    sleep_share: f64,
    subcarriers: usize,
    slots: usize,
) -> Result<BlockCounts> {
    if shares.iter().any(|&mu| !(mu >= 0.0 && mu.is_finite())) {
        return Err(Error::invalid("shares", "must be finite and >= 0"));
    }
    if !(sleep_share >= 0.0 && sleep_share.is_finite()) {
        return Err(Error::invalid("sleep_share", "must be finite and >= 0"));
    }
    if subcarriers == 0 || slots == 0 {
        return Err(Error::invalid("subcarriers", "grid must be non-empty"));
    }
    let users = shares.len();
    let grid = subcarriers * slots;
    let scaled = |mu: f64| mu * grid as f64;
    let (mut blocks, mut sleep_slots): (Vec<usize>, usize) =
        if (slots * subcarriers) as f64 * sleep_share < users as f64 {
            (
                shares
                    .iter()
                    .map(|&mu| libm::floor(scaled(mu)) as usize)
                    .collect(),
                0,
            )
        } else {
            let sleep = libm::floor(slots as f64 * sleep_share - users as f64 / subcarriers as f64);
            (
                shares
                    .iter()
                    .map(|&mu| libm::ceil(scaled(mu)) as usize)
                    .collect(),
                (sleep.max(0.0) as usize).min(slots),
            )
        };

    // Guard against floating-point overshoot of the rounded counts.
    while blocks.iter().sum::<usize>() > subcarriers * (slots - sleep_slots) {
        if sleep_slots > 0 {
            sleep_slots -= 1;
        } else {
            let largest = (0..users)
                .max_by_key(|&k| (blocks[k], usize::MAX - k))
                .unwrap_or(0);
            blocks[largest] -= 1;
        }
    }

    let available = subcarriers * (slots - sleep_slots);
    let mut remainder = available - blocks.iter().sum::<usize>();
    if users > 0 && remainder > 0 {
        let mut eligible: Vec<usize> = (0..users).filter(|&k| shares[k] > 0.0).collect();
        if eligible.is_empty() {
            eligible = (0..users).collect();
        }
        let mut i = 0;
        while remainder > 0 {
            blocks[eligible[i % eligible.len()]] += 1;
            remainder -= 1;
            i += 1;
        }
    }
    Ok(BlockCounts {
        blocks,
        sleep_slots,
    })
}

/// Splits per-user block counts over `active_slots` slots of `subcarriers`
/// each. Every user gets `floor(blocks / active_slots)` per slot; the
/// leftovers are dealt cyclically across slots so that each slot is full.
///
/// Returns `counts[slot][user]`. The total must be `subcarriers * active_slots`.
pub fn split_over_slots(
    blocks: &[usize],
    subcarriers: usize,
    active_slots: usize,
) -> Result<Vec<Vec<usize>>> {
    if blocks.iter().sum::<usize>() != subcarriers * active_slots {
        return Err(Error::invalid(
            "blocks",
            "total must equal subcarriers * active_slots",
        ));
    }
    if active_slots == 0 {
        return Ok(Vec::new());
    }
    let mut counts = vec![vec![0usize; blocks.len()]; active_slots];
    let mut cursor = 0usize;
    for (k, &m) in blocks.iter().enumerate() {
        let base = m / active_slots;
        for slot in counts.iter_mut() {
            slot[k] = base;
        }
        for _ in 0..m % active_slots {
            counts[cursor][k] += 1;
            cursor = (cursor + 1) % active_slots;
        }
    }
    Ok(counts)
}
