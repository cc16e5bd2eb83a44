//! Parallel Monte Carlo sweeps over per-user target rates.
//!
//! Trial `i` draws its channels from a ChaCha8 generator seeded with the
//! master seed and switched to stream `i`, so every trial sees the same
//! randomness regardless of which worker runs it. All schemes and rates of a
//! trial share one draw. Outcomes are collected in trial order before
//! aggregation, which makes results independent of the worker count.

use bspower_core::channel::Scenario;
use bspower_core::harness::{
    aggregate, evaluate_trial, Family, PointStats, Scheme, SchemePower, TrialChannels, TrialOutcome,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{AppError, Result};

/// Everything a sweep needs.
#[derive(Debug, Clone)]
pub struct Sweep<'a> {
    /// Scenario.
    pub scenario: &'a Scenario,
    /// Supply models.
    pub power: &'a SchemePower,
    /// Channel family.
    pub family: Family,
    /// Schemes, in output order.
    pub schemes: &'a [Scheme],
    /// Per-user target rates (bit/s).
    pub rates: &'a [f64],
    /// Trials per rate.
    pub trials: usize,
    /// Master seed.
    pub seed: u64,
    /// Worker threads.
    pub workers: usize,
}

/// Random generator of trial `trial`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Draws the channels of trial `trial`.
pub fn trial_channels(
    scenario: &Scenario,
    family: Family,
    seed: u64,
    trial: usize,
) -> TrialChannels {
    TrialChannels::sample(scenario, family, &mut trial_rng(seed, trial))
}

/// Runs the sweep and returns one [`PointStats`] per (rate, scheme), rate-major.
pub fn run_sweep(sweep: &Sweep<'_>) -> Result<Vec<PointStats>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.workers)
        .build()
        .map_err(|e| AppError::config("workers", e.to_string()))?;
    let per_trial: Vec<Vec<Vec<TrialOutcome>>> = pool.install(|| {
        (0..sweep.trials)
            .into_par_iter()
            .map(|trial| {
                let channels = trial_channels(sweep.scenario, sweep.family, sweep.seed, trial);
                sweep
                    .rates
                    .iter()
                    .map(|&rate| {
                        evaluate_trial(sweep.scenario, sweep.power, &channels, rate, sweep.schemes)
                    })
                    .collect()
            })
            .collect()
    });

    let users = sweep.scenario.users;
    let mut points = Vec::with_capacity(sweep.rates.len() * sweep.schemes.len());
    for (r, &rate) in sweep.rates.iter().enumerate() {
        for (s, &scheme) in sweep.schemes.iter().enumerate() {
            let outcomes: Vec<TrialOutcome> = per_trial.iter().map(|t| t[r][s].clone()).collect();
            points.push(aggregate(scheme, rate, users, &outcomes));
        }
    }
    Ok(points)
}

/// Whether every trial of every point was an outage.
pub fn is_infeasible(points: &[PointStats]) -> bool {
    !points.is_empty() && points.iter().all(|p| p.outage_frac >= 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_change_results() {
        let scenario = Scenario::default();
        let power = SchemePower::default();
        let schemes = [Scheme::Ba, Scheme::Dtx, Scheme::Prais];
        let rates = [1e6, 4e6];
        let run = |workers| {
            run_sweep(&Sweep {
                scenario: &scenario,
                power: &power,
                family: Family::Tdma,
                schemes: &schemes,
                rates: &rates,
                trials: 12,
                seed: 5,
                workers,
            })
            .unwrap()
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn streams_differ_per_trial() {
        let scenario = Scenario::default();
        let a = trial_channels(&scenario, Family::Tdma, 1, 0);
        let b = trial_channels(&scenario, Family::Tdma, 1, 1);
        assert_ne!(a.drop.gain, b.drop.gain);
        assert_eq!(a, trial_channels(&scenario, Family::Tdma, 1, 0));
    }
}
