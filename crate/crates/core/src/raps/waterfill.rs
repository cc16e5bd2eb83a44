//! Minimum-energy water-filling for a bit target.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

/// One parallel channel: an eigenmode of one resource block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubChannel {
    /// Eigenvalue (power gain).
    pub gain: f64,
    /// Slot the channel belongs to.
    pub slot: usize,
}

/// Water-filling result.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFilling {
    /// Transmit power per channel in input order (W).
    pub power_w: Vec<f64>,
    /// Bits carried per channel in input order.
    pub bits: Vec<f64>,
    /// `log2` of the water level.
    pub log2_level: f64,
    /// Number of channels with positive power.
    pub active: usize,
}

impl WaterFilling {
    /// Total power over all channels.
    pub fn total_power_w(&self) -> f64 {
        self.power_w.iter().sum()
    }

    /// Total bits over all channels.
    pub fn total_bits(&self) -> f64 {
        self.bits.iter().sum()
    }
}

/// Distributes power over `channels` so that they carry `target_bits` with the
/// least total power.
///
/// Each channel has bandwidth `bandwidth_hz`, lasts `duration_s` and sees
/// noise `noise_w`. Returns `None` when no channel has positive gain but bits
/// are requested.
pub fn water_fill(
    channels: &[SubChannel],
    target_bits: f64,
    bandwidth_hz: f64,
    duration_s: f64,
    noise_w: f64,
) -> Option<WaterFilling> {
    let n = channels.len();
    let mut result = WaterFilling {
        power_w: vec![0.0; n],
        bits: vec![0.0; n],
        log2_level: f64::NEG_INFINITY,
        active: 0,
    };
    if target_bits <= 0.0 {
        return Some(result);
    }
    let symbols = bandwidth_hz * duration_s;
    let mut order: Vec<usize> = (0..n).filter(|&i| channels[i].gain > 0.0).collect();
    if order.is_empty() {
        return None;
    }
    // Stable sort keeps input order (block, then eigenmode) among equal gains.
    order.sort_by(|&a, &b| channels[b].gain.total_cmp(&channels[a].gain));
    let log2_a: Vec<f64> = order
        .iter()
        .map(|&i| libm::log2(symbols * channels[i].gain / (noise_w * LN_2)))
        .collect();

    let demand = target_bits / symbols;
    let mut sum_log2_a = 0.0;
    let mut level = 0.0;
    let mut active = 0;
    for j in 0..order.len() {
        sum_log2_a += log2_a[j];
        level = (demand - sum_log2_a) / (j + 1) as f64;
        active = j + 1;
        // Stop once the next channel's floor is at or above the water level.
        if j + 1 < order.len() && level <= -log2_a[j + 1] {
            break;
        }
    }

    let scale = symbols / LN_2;
    for (j, &i) in order.iter().take(active).enumerate() {
        let power = scale * (libm::exp2(level) - libm::exp2(-log2_a[j]));
        result.power_w[i] = power.max(0.0);
        result.bits[i] = symbols * (level + log2_a[j]).max(0.0);
    }
    result.log2_level = level;
    result.active = active;
    Some(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_channel_is_exact_inverse() {
        let ch = [SubChannel {
            gain: 1e-10,
            slot: 0,
        }];
        let noise = 8e-16;
        let wf = water_fill(&ch, 2000.0, 200e3, 1e-3, noise).unwrap();
        let bits = 200e3 * 1e-3 * libm::log2(1.0 + wf.power_w[0] * 1e-10 / noise);
        assert!((bits - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn weak_channels_stay_dry() {
        let ch = [
            SubChannel { gain: 1.0, slot: 0 },
            SubChannel {
                gain: 1e-9,
                slot: 0,
            },
        ];
        let wf = water_fill(&ch, 10.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(wf.active, 1);
        assert_eq!(wf.power_w[1], 0.0);
        assert!((wf.total_bits() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn no_usable_channel() {
        assert!(water_fill(&[SubChannel { gain: 0.0, slot: 0 }], 1.0, 1.0, 1.0, 1.0).is_none());
        assert!(water_fill(&[], 0.0, 1.0, 1.0, 1.0).is_some());
    }
}
