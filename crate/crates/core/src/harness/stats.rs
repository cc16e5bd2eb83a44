//! Aggregation of trial outcomes at one rate point.

use super::{Scheme, TrialOutcome};

/// Points whose outage fraction reaches this limit are excluded from curves.
pub const INCLUSION_OUTAGE_LIMIT: f64 = 0.10;

/// Summary of one scheme at one rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointStats {
    /// Scheme.
    pub scheme: Scheme,
    /// Per-user target rate (bit/s).
    pub rate_bps: f64,
    /// Mean supply power over trials without outage (W).
    pub mean_supply_w: Option<f64>,
    /// Fraction of trials in outage.
    pub outage_frac: f64,
    /// Number of trials.
    pub trials: usize,
    /// Sum rate divided by mean supply power (bit/J).
    pub energy_eff_bpj: Option<f64>,
    /// Outage fraction below [`INCLUSION_OUTAGE_LIMIT`].
    pub included: bool,
    /// Mean sleep slots over trials without outage, when applicable.
    pub mean_sleep_slots: Option<f64>,
    /// Fraction of trials without outage that used two antennas, when applicable.
    pub two_antenna_frac: Option<f64>,
}

/// Aggregates `outcomes` (in trial order) of `scheme` at `rate_bps` for
/// `users` users.
pub fn aggregate(
    scheme: Scheme,
    rate_bps: f64,
    users: usize,
    outcomes: &[TrialOutcome],
) -> PointStats {
    let trials = outcomes.len();
    let served: usize = outcomes.iter().filter(|o| !o.outage).count();
    let outage_frac = if trials == 0 {
        0.0
    } else {
        (trials - served) as f64 / trials as f64
    };
    let mut supply_sum = 0.0;
    let mut sleep_sum = 0.0;
    let mut sleep_count = 0usize;
    let mut two = 0usize;
    let mut antenna_count = 0usize;
    for o in outcomes.iter().filter(|o| !o.outage) {
        supply_sum += o.supply_w;
        if let Some(s) = o.sleep_slots {
            sleep_sum += s as f64;
            sleep_count += 1;
        }
        if let Some(d) = o.antennas {
            antenna_count += 1;
            if d == 2 {
                two += 1;
            }
        }
    }
    let mean_supply_w = (served > 0).then(|| supply_sum / served as f64);
    let energy_eff_bpj = mean_supply_w.map(|p| users as f64 * rate_bps / p);
    PointStats {
        scheme,
        rate_bps,
        mean_supply_w,
        outage_frac,
        trials,
        energy_eff_bpj,
        included: trials > 0 && outage_frac < INCLUSION_OUTAGE_LIMIT,
        mean_sleep_slots: (sleep_count > 0).then(|| sleep_sum / sleep_count as f64),
        two_antenna_frac: (antenna_count > 0).then(|| two as f64 / antenna_count as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(s: f64) -> TrialOutcome {
        TrialOutcome {
            scheme: Scheme::Raps,
            supply_w: s,
            outage: false,
            violation: false,
            achieved_rate_bps: alloc::vec![1e6; 10],
            antennas: Some(2),
            sleep_slots: Some(3),
        }
    }

    #[test]
    fn outage_trials_do_not_enter_the_mean() {
        let out = TrialOutcome {
            scheme: Scheme::Raps,
            supply_w: f64::INFINITY,
            outage: true,
            violation: true,
            achieved_rate_bps: alloc::vec![0.0; 10],
            antennas: None,
            sleep_slots: None,
        };
        let s = aggregate(Scheme::Raps, 1e6, 10, &[ok(100.0), ok(200.0), out]);
        assert_eq!(s.mean_supply_w, Some(150.0));
        assert!((s.outage_frac - 1.0 / 3.0).abs() < 1e-15);
        assert!(!s.included);
        assert_eq!(s.energy_eff_bpj, Some(1e7 / 150.0));
        assert_eq!(s.mean_sleep_slots, Some(3.0));
        assert_eq!(s.two_antenna_frac, Some(1.0));
    }
}
