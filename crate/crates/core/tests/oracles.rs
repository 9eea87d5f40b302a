//! Monte-Carlo estimators against deterministic oracles.

mod common;

use cpa_gmac::capacity::cc_sum_capacity;
use cpa_gmac::metric::{i1_estimate, q_metric};
use cpa_gmac::{cc_sum_capacity_random_phase, make_psk, ChannelSpec, McConfig, PhaseModel};
use common::{capacity_gh, capacity_gh_random_phase, gauss_hermite};

fn p(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

#[test]
fn hermite_rule_integrates_gaussian_moments() {
    let (x, w) = gauss_hermite(48);
    let sp = std::f64::consts::PI.sqrt();
    assert!((w.iter().sum::<f64>() - sp).abs() < 1e-12);
    let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
    assert!((m4 - 0.75 * sp).abs() < 1e-11);
}

#[test]
fn bpsk_single_user_matches_quadrature() {
    let b = make_psk(2).unwrap();
    let mc = McConfig::new(20_000, 1, 11).unwrap();
    for snr in [0.0, 6.0] {
        let a = p(snr).sqrt();
        // A zero-power second user turns the pair into a single-user channel
        // with four coincident points.
        let est = cc_sum_capacity(&b, &b, a, 1e-9, &ChannelSpec::awgn(1.0), &mc).unwrap();
        let oracle = capacity_gh(b.points(), b.points(), a, 1e-9, 1.0, 48);
        assert!((est.bits - oracle).abs() <= 3.0 * est.stderr + 1e-6, "{snr} dB: {} vs {oracle}", est.bits);
        assert!(oracle <= 1.0 + 1e-9);
    }
}

#[test]
fn qpsk_random_phase_matches_quadrature() {
    let q = make_psk(4).unwrap();
    let a = p(10.0).sqrt();
    let mc = McConfig {
        noise_samples: 20_000,
        phase_draws: 400,
        seed: 4,
    };
    let ch = ChannelSpec::new(1.0, PhaseModel::RandomUniform).unwrap();
    let est = cc_sum_capacity_random_phase(&q, &q, a, a, &ch, &mc).unwrap();
    let oracle = capacity_gh_random_phase(q.points(), q.points(), a, a, 1.0, 24, 32);
    assert!((est.bits - oracle).abs() <= 3.0 * est.stderr, "{} ± {} vs {oracle}", est.bits, est.stderr);
}

#[test]
fn i1_identity_and_jensen_bound() {
    let s = make_psk(8).unwrap();
    let n = 64.0f64;
    let mc = McConfig::new(4_000, 1, 21).unwrap();
    for (snr, ab) in [(0.0, 0.3), (10.0, 0.6), (10.0, 1.0)] {
        let (pl, ps) = ((2.0 - ab) * p(snr), ab * p(snr));
        let (i1, se) = i1_estimate(&s, &s, pl, ps, 1.0, &mc).unwrap();
        let cap = cc_sum_capacity(&s, &s, pl.sqrt(), ps.sqrt(), &ChannelSpec::awgn(1.0), &mc).unwrap();
        let via_cap = n * (n.log2() - cap.bits) - n * std::f64::consts::LOG2_E;
        let combined = (se * se + (n * cap.stderr).powi(2)).sqrt();
        assert!((i1 - via_cap).abs() <= 3.0 * combined, "{snr} dB ᾱ={ab}: {i1} vs {via_cap}");
        let q = q_metric(&s, &s, p(snr), p(snr), ab, 1.0).unwrap().value;
        assert!(i1 <= q + 3.0 * se);
    }
}
