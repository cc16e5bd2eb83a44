use approx::assert_relative_eq;
use bspower_core::harness::tdma_dtx;
use bspower_core::optimizer::{
    dual_stream_curvature, single_stream_curvature, BarrierSettings, Link, ShareProblem,
    SolveStatus, TdmaInstance, UserCost,
};
use bspower_core::powermodel::AffineParams;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NOISE: f64 = 4.0e-14;
const BANDWIDTH: f64 = 10e6;

fn macro_sector() -> AffineParams {
    AffineParams::macro_sector(1).unwrap()
}

fn cost(rate: f64, link: Link, power: &AffineParams) -> UserCost {
    UserCost {
        rate_bps: rate,
        bandwidth_hz: BANDWIDTH,
        idle_w: power.idle_w,
        slope: power.slope,
        link,
        max_tx_power_w: power.max_tx_power_w,
    }
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn instance<'a>(gains: &'a [f64], rates: &'a [f64]) -> TdmaInstance<'a> {
    TdmaInstance {
        gains,
        rates,
        noise_w: NOISE,
        bandwidth_hz: BANDWIDTH,
        max_tx_power_w: 40.0,
    }
}

/// Random feasible (cost, share) pair. Gains and rates keep the curvature
/// well above the rounding floor of the finite differences.
fn random_point(rng: &mut ChaCha8Rng, dual: bool) -> (UserCost, f64) {
    let power = macro_sector();
    loop {
        let gain = db(rng.random_range(-125.0..-85.0));
        let link = if dual {
            Link::dual(NOISE, gain, gain * rng.random_range(0.01..1.0))
        } else {
            Link::single(NOISE, gain)
        };
        let c = cost(rng.random_range(0.5e6..15e6), link, &power);
        let lo = c.min_share();
        if lo < 0.9 {
            return (c, rng.random_range(lo.max(1e-3) * 1.05..1.0));
        }
    }
}

fn central_second_difference(c: &UserCost, mu: f64) -> f64 {
    let h = 1e-5 * mu;
    (c.derivative(mu + h) - c.derivative(mu - h)) / (2.0 * h)
}

fn central_first_difference(c: &UserCost, mu: f64) -> f64 {
    let h = 1e-6 * mu;
    (c.value(mu + h) - c.value(mu - h)) / (2.0 * h)
}

#[test]
fn single_stream_curvature_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let (c, mu) = random_point(&mut rng, false);
        let analytic = single_stream_curvature(&c, mu);
        assert!(analytic >= 0.0);
        assert_relative_eq!(
            analytic,
            central_second_difference(&c, mu),
            max_relative = 1e-4
        );
        assert_relative_eq!(c.second_derivative(mu), analytic, max_relative = 1e-9);
        assert_relative_eq!(
            c.derivative(mu),
            central_first_difference(&c, mu),
            max_relative = 1e-5
        );
    }
}

#[test]
fn dual_stream_curvature_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let (c, mu) = random_point(&mut rng, true);
        let analytic = dual_stream_curvature(&c, mu);
        assert!(analytic >= 0.0);
        assert_relative_eq!(
            analytic,
            central_second_difference(&c, mu),
            max_relative = 1e-4
        );
        assert_relative_eq!(c.second_derivative(mu), analytic, max_relative = 1e-9);
        assert_relative_eq!(
            c.derivative(mu),
            central_first_difference(&c, mu),
            max_relative = 1e-5
        );
    }
}

#[test]
fn min_share_meets_the_power_limit() {
    let c = cost(8e6, Link::single(NOISE, db(-115.0)), &macro_sector());
    let lo = c.min_share();
    assert!(lo > 0.0 && lo < 1.0);
    assert_relative_eq!(c.tx_power(lo), 40.0, max_relative = 1e-9);
}

/// Exhaustive search over `(mu1, mu2)` with the sleep share as the rest:
/// a 1e-3 grid, then a 1e-4 grid around its best point.
fn grid_search(problem: &ShareProblem) -> f64 {
    let lo = problem.min_shares();
    let eval = |a: f64, b: f64| {
        if a < lo[0] || b < lo[1] || a + b > 1.0 {
            f64::INFINITY
        } else {
            problem.objective(&[a, b], 1.0 - a - b)
        }
    };
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=1000 {
        for j in 0..=1000 - i {
            let (a, b) = (f64::from(i) * 1e-3, f64::from(j) * 1e-3);
            let v = eval(a, b);
            if v < best.0 {
                best = (v, a, b);
            }
        }
    }
    let (_, ca, cb) = best;
    for i in -20..=20 {
        for j in -20..=20 {
            let (a, b) = (ca + f64::from(i) * 1e-4, cb + f64::from(j) * 1e-4);
            best.0 = best.0.min(eval(a, b));
        }
    }
    best.0
}

#[test]
fn two_users_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let power = macro_sector();
    let mut checked = 0;
    while checked < 5 {
        let gains = [
            db(rng.random_range(-120.0..-90.0)),
            db(rng.random_range(-120.0..-90.0)),
        ];
        let rates = [rng.random_range(1e6..20e6), rng.random_range(1e6..20e6)];
        let problem = instance(&gains, &rates).with_sleep(&power).unwrap();
        let solution = problem.solve();
        if !solution.is_feasible() {
            continue;
        }
        let grid = grid_search(&problem);
        assert!(
            solution.objective <= grid * (1.0 + 1e-9),
            "{} > {grid}",
            solution.objective
        );
        assert_relative_eq!(solution.objective, grid, max_relative = 1e-3);
        checked += 1;
    }
}

#[test]
fn identical_users_get_identical_shares() {
    let gains = [db(-105.0); 2];
    let rates = [4e6; 2];
    let s = instance(&gains, &rates)
        .with_sleep(&macro_sector())
        .unwrap()
        .solve();
    assert_relative_eq!(s.shares[0], s.shares[1], max_relative = 1e-9);
}

#[test]
fn sleep_no_cheaper_than_idle_disables_sleep() {
    let power = AffineParams {
        sleep_w: 186.0,
        ..macro_sector()
    };
    let gains = [db(-100.0)];
    let rates = [3e6];
    let s = instance(&gains, &rates).with_sleep(&power).unwrap().solve();
    assert!(s.sleep_share.abs() < 1e-9, "{}", s.sleep_share);
    assert_relative_eq!(s.shares[0], 1.0, max_relative = 1e-9);
}

#[test]
fn power_control_argmin_ignores_the_power_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let gains: Vec<f64> = (0..6)
        .map(|_| db(rng.random_range(-120.0..-90.0)))
        .collect();
    let rates: Vec<f64> = (0..6).map(|_| rng.random_range(0.5e6..3e6)).collect();
    let inst = instance(&gains, &rates);
    let base = inst.power_control(&macro_sector()).unwrap().solve();
    for power in [
        AffineParams::deep_sleep_sector(),
        AffineParams::transmit_dominated_sector(),
        AffineParams {
            idle_w: 1000.0,
            slope: 0.5,
            ..macro_sector()
        },
    ] {
        let other = inst.power_control(&power).unwrap().solve();
        for (a, b) in base.shares.iter().zip(&other.shares) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }
}

#[test]
fn single_user_power_control_uses_the_whole_frame() {
    let gains = [db(-100.0)];
    let rates = [5e6];
    let s = instance(&gains, &rates)
        .power_control(&macro_sector())
        .unwrap()
        .solve();
    assert_relative_eq!(s.shares[0], 1.0, max_relative = 1e-9);
    let expected = NOISE / gains[0] * ((5e6f64 / BANDWIDTH).exp2() - 1.0);
    assert_relative_eq!(s.tx_power_w[0], expected, max_relative = 1e-6);
}

#[test]
fn larger_rate_gets_more_time() {
    let gains = [db(-105.0); 2];
    let rates = [2e6, 4e6];
    let s = instance(&gains, &rates)
        .power_control(&macro_sector())
        .unwrap()
        .solve();
    assert!(s.shares[1] > s.shares[0]);
}

#[test]
fn zero_rates_sleep_the_whole_frame() {
    let gains = [db(-100.0); 3];
    let rates = [0.0; 3];
    let s = instance(&gains, &rates)
        .with_sleep(&macro_sector())
        .unwrap()
        .solve();
    assert_eq!(s.objective, 107.0);
    assert_eq!(s.shares, vec![0.0; 3]);
}

#[test]
fn zero_rate_user_is_left_out() {
    let gains = [db(-100.0), db(-100.0)];
    let rates = [0.0, 3e6];
    let s = instance(&gains, &rates)
        .with_sleep(&macro_sector())
        .unwrap()
        .solve();
    assert_eq!(s.shares[0], 0.0);
    assert!(s.shares[1] > 0.0);
}

#[test]
fn unreachable_rates_are_infeasible() {
    let gains = [db(-130.0); 4];
    let rates = [30e6; 4];
    let s = instance(&gains, &rates)
        .with_sleep(&macro_sector())
        .unwrap()
        .solve();
    assert_eq!(s.status, SolveStatus::Infeasible);
    assert!(!s.is_feasible());
}

#[test]
fn single_link_transmit_share_is_interior() {
    let power = macro_sector();
    let gains = [db(-112.0)];
    let rates = [6e6];
    let problem = instance(&gains, &rates).with_sleep(&power).unwrap();
    let s = problem.solve();
    let lo = problem.min_shares()[0];
    let active = 1.0 - s.sleep_share;
    assert!(lo < active && active < 1.0, "{lo} {active}");

    let steps = 100_000;
    let (mut best, mut best_phi) = (f64::INFINITY, 0.0);
    for i in 0..=steps {
        let phi = lo + (1.0 - lo) * f64::from(i) / f64::from(steps);
        let v = problem.objective(&[phi], 1.0 - phi);
        if v < best {
            best = v;
            best_phi = phi;
        }
    }
    assert!((best_phi - active).abs() < 1e-4, "{best_phi} vs {active}");
    assert!(s.objective <= best * (1.0 + 1e-12));
}

#[test]
fn continuous_in_the_gains() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let power = macro_sector();
    for _ in 0..20 {
        let gains: Vec<f64> = (0..4)
            .map(|_| db(rng.random_range(-115.0..-90.0)))
            .collect();
        let rates = vec![3e6; 4];
        let base = instance(&gains, &rates).with_sleep(&power).unwrap().solve();
        let nudged: Vec<f64> = gains.iter().map(|g| g * 1.01).collect();
        let moved = instance(&nudged, &rates)
            .with_sleep(&power)
            .unwrap()
            .solve();
        if !(base.is_feasible() && moved.is_feasible()) {
            continue;
        }
        for (a, b) in base.shares.iter().zip(&moved.shares) {
            assert!((a - b).abs() <= 0.05);
        }
    }
}

fn random_instance(rng: &mut ChaCha8Rng, users: usize) -> (Vec<f64>, Vec<f64>) {
    let gains = (0..users)
        .map(|_| db(rng.random_range(-125.0..-85.0)))
        .collect();
    let rates = (0..users).map(|_| rng.random_range(0.05e6..4e6)).collect();
    (gains, rates)
}

#[test]
fn barrier_and_kkt_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let power = macro_sector();
    let mut compared = 0;
    for trial in 0..300 {
        let (gains, rates) = random_instance(&mut rng, 1 + trial % 10);
        for problem in [
            instance(&gains, &rates).with_sleep(&power).unwrap(),
            instance(&gains, &rates).power_control(&power).unwrap(),
        ] {
            let barrier = problem.solve_barrier(&BarrierSettings::default());
            let kkt = problem.solve_kkt();
            assert_eq!(barrier.is_feasible(), kkt.is_feasible());
            if !barrier.is_feasible() {
                continue;
            }
            assert_eq!(barrier.status, SolveStatus::Optimal);
            assert_relative_eq!(barrier.objective, kkt.objective, max_relative = 1e-6);
            let combined = problem.solve();
            assert!(combined.objective <= barrier.objective.min(kkt.objective) * (1.0 + 1e-9));
            compared += 1;
        }
    }
    assert!(compared > 400, "{compared}");
}

#[test]
fn never_worse_than_equal_shares() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let power = macro_sector();
    for trial in 0..200 {
        let users = 1 + trial % 10;
        let (gains, rates) = random_instance(&mut rng, users);
        let problem = instance(&gains, &rates).with_sleep(&power).unwrap();
        let equal = vec![1.0 / users as f64; users];
        if problem.min_shares().iter().any(|&lo| lo > equal[0]) {
            continue;
        }
        let s = problem.solve();
        assert!(s.objective <= problem.objective(&equal, 0.0) * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sleep_aware_never_loses(seed in any::<u64>(), users in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (gains, rates) = random_instance(&mut rng, users);
        let power = macro_sector();
        let inst = instance(&gains, &rates);
        let with_sleep = inst.with_sleep(&power).unwrap().solve();
        let pc = inst.power_control(&power).unwrap().solve();
        prop_assert_eq!(with_sleep.is_feasible(), pc.is_feasible());
        if with_sleep.is_feasible() {
            prop_assert!(with_sleep.objective <= pc.objective);
            if let Some(dtx) = tdma_dtx(&inst, &power) {
                prop_assert!(with_sleep.objective <= dtx);
            }
        }
    }

    #[test]
    fn shares_stay_on_the_simplex(seed in any::<u64>(), users in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (gains, rates) = random_instance(&mut rng, users);
        let problem = instance(&gains, &rates).with_sleep(&macro_sector()).unwrap();
        let s = problem.solve();
        if s.is_feasible() {
            let total: f64 = s.shares.iter().sum::<f64>() + s.sleep_share;
            prop_assert!((total - 1.0).abs() < 1e-9);
            prop_assert!(s.sleep_share >= 0.0);
            for (mu, lo) in s.shares.iter().zip(problem.min_shares()) {
                prop_assert!(*mu >= lo * (1.0 - 1e-12));
            }
            for p in &s.tx_power_w {
                prop_assert!(*p <= 40.0 * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn costs_are_convex(gain_db in -125.0f64..-85.0, ratio in 0.0f64..1.0, rate in 0.1e6f64..20e6, t in 0.0f64..1.0) {
        let power = macro_sector();
        let gain = db(gain_db);
        for link in [Link::single(NOISE, gain), Link::dual(NOISE, gain, gain * ratio)] {
            let c = cost(rate, link, &power);
            let lo = c.min_share();
            if lo < 1.0 {
                let mu = lo + (1.0 - lo) * t.max(1e-6);
                prop_assert!(c.second_derivative(mu) >= 0.0);
            }
        }
    }
}
