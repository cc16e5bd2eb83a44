use bspower_core::channel::{Fading, Scenario};
use bspower_core::harness::{
    aggregate, evaluate_trial, tdma_ba, tdma_dtx, Family, Scheme, SchemePower, TrialChannels,
};
use bspower_core::optimizer::TdmaInstance;
use bspower_core::powermodel::AffineParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TDMA: [Scheme; 4] = [Scheme::Ba, Scheme::Dtx, Scheme::Pc, Scheme::Prais];
const OFDMA: [Scheme; 3] = [Scheme::Ba, Scheme::Dtx, Scheme::Raps];

fn trial(seed: u64, scenario: &Scenario, family: Family) -> TrialChannels {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TrialChannels::sample(scenario, family, &mut rng)
}

fn sector() -> AffineParams {
    AffineParams::macro_sector(1).unwrap()
}

#[test]
fn single_trial_statistics() {
    let scenario = Scenario::default();
    let channels = trial(1, &scenario, Family::Tdma);
    let outcomes = evaluate_trial(&scenario, &SchemePower::default(), &channels, 1e6, &TDMA);
    for o in &outcomes {
        let s = aggregate(o.scheme, 1e6, scenario.users, std::slice::from_ref(o));
        assert_eq!(s.trials, 1);
        assert_eq!(s.mean_supply_w, Some(o.supply_w));
        assert_eq!(s.outage_frac, 0.0);
        assert!(s.included);
        assert_eq!(s.energy_eff_bpj, Some(1e7 / o.supply_w));
    }
}

#[test]
fn tdma_benchmark_endpoints() {
    let p = sector();
    let gains = [1e-10; 4];
    let zero = [0.0; 4];
    let base = TdmaInstance {
        gains: &gains,
        rates: &zero,
        noise_w: 4e-14,
        bandwidth_hz: 10e6,
        max_tx_power_w: 40.0,
    };
    assert_eq!(tdma_ba(&base, &p), Some(p.idle_w));
    assert_eq!(tdma_dtx(&base, &p), Some(p.sleep_w));

    let capacity = 10e6 * (1.0 + 1e-10 * 40.0 / 4e-14f64).log2();
    let full = [capacity / 4.0; 4];
    let busy = TdmaInstance {
        rates: &full,
        ..base
    };
    assert!((tdma_dtx(&busy, &p).unwrap() - p.full_load_w()).abs() < 1e-9);
    assert!((tdma_ba(&busy, &p).unwrap() - p.full_load_w()).abs() < 1e-9);
    let over = [capacity / 3.9; 4];
    assert_eq!(
        tdma_dtx(
            &TdmaInstance {
                rates: &over,
                ..base
            },
            &p
        ),
        None
    );
}

#[test]
fn prais_dominates_on_every_trial() {
    let scenario = Scenario::default();
    let power = SchemePower::default();
    for seed in 0..40 {
        let channels = trial(seed, &scenario, Family::Tdma);
        for rate in [0.5e6, 3e6, 6e6, 10e6] {
            let o = evaluate_trial(&scenario, &power, &channels, rate, &TDMA);
            let [ba, dtx, pc, prais] = [&o[0], &o[1], &o[2], &o[3]];
            if prais.outage {
                assert!(pc.outage && dtx.outage && ba.outage);
                continue;
            }
            assert!(prais.supply_w <= pc.supply_w);
            assert!(prais.supply_w <= dtx.supply_w);
            assert!(pc.supply_w <= ba.supply_w * (1.0 + 1e-9));
        }
    }
}

#[test]
fn supply_grows_with_rate() {
    let scenario = Scenario::default();
    let power = SchemePower::default();
    let full = power.tdma.full_load_w();
    for seed in 0..20 {
        let channels = trial(seed, &scenario, Family::Tdma);
        let mut last = [0.0; 4];
        for step in 0..8 {
            let rate = 0.25e6 + step as f64 * 1e6;
            let o = evaluate_trial(&scenario, &power, &channels, rate, &TDMA);
            if o.iter().any(|x| x.outage) {
                break;
            }
            for (i, x) in o.iter().enumerate() {
                assert!(
                    x.supply_w >= last[i] * (1.0 - 1e-9),
                    "{:?} at {rate}",
                    x.scheme
                );
                assert!(x.supply_w <= full * (1.0 + 1e-9));
                last[i] = x.supply_w;
            }
        }
    }
}

#[test]
fn idle_ofdma_frame() {
    let scenario = Scenario::default();
    let power = SchemePower::default();
    let channels = trial(3, &scenario, Family::Ofdma);
    let o = evaluate_trial(&scenario, &power, &channels, 0.0, &OFDMA);
    assert_eq!(o[0].supply_w, power.ofdma[0].idle_w);
    assert_eq!(o[1].supply_w, power.ofdma[0].sleep_w);
    assert_eq!(o[2].supply_w, power.ofdma[0].sleep_w);
    assert!(o.iter().all(|x| !x.outage));
}

#[test]
fn ofdma_schemes_respect_the_envelope() {
    let scenario = Scenario {
        fading: Fading::Iid,
        ..Scenario::default()
    };
    let power = SchemePower::default();
    for seed in 0..5 {
        let channels = trial(seed, &scenario, Family::Ofdma);
        let o = evaluate_trial(&scenario, &power, &channels, 2e6, &OFDMA);
        for x in o.iter().filter(|x| !x.outage) {
            let d = x.antennas.unwrap();
            let p = &power.ofdma[d - 1];
            assert!(x.supply_w >= p.sleep_w && x.supply_w <= p.full_load_w() * (1.0 + 1e-9));
            assert!(x.sleep_slots.unwrap() <= scenario.slots);
        }
    }
}

#[test]
fn unsupported_scheme_is_an_outage() {
    let scenario = Scenario::default();
    let channels = trial(0, &scenario, Family::Tdma);
    let o = evaluate_trial(
        &scenario,
        &SchemePower::default(),
        &channels,
        1e6,
        &[Scheme::Raps],
    );
    assert!(o[0].outage);
    assert!(!Scheme::Pc.supports(Family::Ofdma));
    assert_eq!("PRAIS".parse::<Scheme>().unwrap(), Scheme::Prais);
    assert!("nope".parse::<Scheme>().is_err());
}
