//! Acceptance gates. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any gate fails. Pass criterion ids (`c1`, `c7`, ...) as
//! arguments to run a subset.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use cpa_gmac::capacity::{cc_sum_capacity, cpa_sum_capacity};
use cpa_gmac::demap::{joint_ml_demap, separable_ml_demap, Axis, PamProjection};
use cpa_gmac::metric::{i1_estimate, q_metric, q_total, PhaseAverage};
use cpa_gmac::optimizer::{
    alpha_objectives, alpha_opt, alpha_star, powers, theta_star, GridSpec, MetricPhase, SearchGrids,
};
use cpa_gmac::partition::{best_partition, PamAlphabet, PartitionRule};
use cpa_gmac::{make_8qam, make_psk, make_qam, sum_constellation, ChannelSpec, ComplexPoint, Constellation, CpaConfig, McConfig, PhaseModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

// Tolerances and budgets.
const C1_ALPHA_TOL: f64 = 0.02;
const C1_LIMIT: Duration = Duration::from_secs(60);
const C2_ALPHA_TOL: f64 = 0.06;
const C2_CAP_TOL: f64 = 0.01;
const C2_SAMPLES: usize = 20_000;
const C2_LIMIT: Duration = Duration::from_secs(15 * 60);
const C3_DRAWS: usize = 1_000;
const C3_LIMIT: Duration = Duration::from_secs(20 * 60);
const C4_CR_TOL: f64 = 0.1;
const K_SIGMA: f64 = 3.0;
const C9_NOISY: usize = 100_000;

const SNR_T1: [f64; 16] = [0., 2., 4., 6., 8., 10., 12., 14., 16., 18., 20., 22., 24., 26., 28., 30.];
const T1_QPSK: [f64; 16] = [0.74, 0.65, 0.52, 0.46, 0.43, 0.41, 0.41, 0.40, 0.40, 0.40, 0.37, 0.24, 0.15, 0.10, 0.06, 0.04];
const T1_8PSK: [f64; 16] = [0.65, 0.85, 0.74, 0.67, 0.65, 0.64, 0.59, 0.53, 0.50, 0.49, 0.49, 0.49, 0.49, 0.49, 0.48, 0.13];
const T1_16PSK: [f64; 16] = [0.65, 0.85, 0.74, 0.67, 0.66, 0.67, 0.70, 0.74, 0.79, 0.78, 0.59, 0.58, 0.56, 0.55, 0.55, 0.55];
const T1_16QAM: [f64; 16] = [0.48, 1.00, 1.00, 1.00, 0.84, 0.74, 0.68, 0.46, 0.62, 0.13, 0.12, 0.12, 0.12, 0.12, 0.12, 0.12];

const SNR_T2: [f64; 7] = [0., 4., 8., 12., 16., 20., 24.];
const T2_QPSK_OPT: [f64; 7] = [0.88, 0.55, 0.44, 0.41, 0.41, 0.38, 0.19];
const T2_8PSK_OPT: [f64; 7] = [0.92, 0.83, 0.66, 0.60, 0.52, 0.49, 0.49];

const SNR_T3: [f64; 7] = [0., 5., 10., 15., 20., 25., 30.];
const T3_QPSK: [f64; 7] = [0.86, 0.54, 0.38, 0.32, 0.30, 0.12, 0.04];
const T3_8QAM: [f64; 7] = [0.97, 0.97, 0.66, 0.45, 0.13, 0.12, 0.10];
const T3_8PSK: [f64; 7] = [0.75, 0.72, 0.62, 0.54, 0.16, 0.15, 0.13];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }
}

fn qpsk() -> Constellation {
    make_psk(4).unwrap()
}

fn psk8() -> Constellation {
    make_psk(8).unwrap()
}

fn alpha_grid() -> GridSpec {
    GridSpec::alpha_default()
}

fn cpa(s: &Constellation, s2: &Constellation, snr: f64, ratio: f64, alpha: f64, phase: PhaseModel, mc: &McConfig) -> (f64, f64) {
    let (p1, p2) = powers(snr, ratio);
    let ch = ChannelSpec::new(1.0, phase).unwrap();
    let e = cpa_sum_capacity(s, s2, &CpaConfig::new(p1, p2, alpha).unwrap(), &ch, mc).unwrap();
    (e.bits, e.stderr)
}

fn rss(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

fn c1_table1() -> Outcome {
    let t0 = Instant::now();
    let cols: [(&str, &[f64; 16], bool); 4] = [
        ("qpsk", &T1_QPSK, true),
        ("8psk", &T1_8PSK, true),
        ("16psk", &T1_16PSK, false),
        ("16qam", &T1_16QAM, false),
    ];
    let (mut dominated, mut close, mut gated_close, mut exact) = (0, 0, 0, 0);
    let mut max_dev: f64 = 0.0;
    let mut details = Vec::new();
    for (name, reference, gated) in cols {
        let s = Constellation::by_name(name).unwrap();
        for (i, &snr) in SNR_T1.iter().enumerate() {
            let (p1, p2) = powers(snr, 1.0);
            let ours = alpha_star(&s, &s, p1, p2, 1.0, &alpha_grid(), &MetricPhase::None).unwrap();
            let q_ref = q_total(&s, &s, p1, p2, reference[i], 1.0).unwrap();
            let q_ours = q_total(&s, &s, p1, p2, ours.alpha, 1.0).unwrap();
            let dev = (ours.alpha - reference[i]).abs();
            if q_ours <= q_ref {
                dominated += 1;
            } else {
                details.push(format!("{name} {snr} dB: Q(ours)={q_ours} > Q(ref)={q_ref}"));
            }
            if dev < 5e-9 {
                exact += 1;
            }
            if gated {
                max_dev = max_dev.max(dev);
                if dev <= C1_ALPHA_TOL + 1e-9 {
                    gated_close += 1;
                } else {
                    details.push(format!("{name} {snr} dB: α*={} vs {}", ours.alpha, reference[i]));
                }
            }
            if dev <= C1_ALPHA_TOL + 1e-9 {
                close += 1;
            }
        }
    }
    let el = t0.elapsed();
    let pass = dominated == 64 && gated_close == 32 && el < C1_LIMIT;
    let mut o = Outcome::new(
        pass,
        format!(
            "dominance {dominated}/64, |Δα|≤{C1_ALPHA_TOL} on QPSK/8-PSK {gated_close}/32 (max {max_dev:.2}), exact {exact}/64, within tol {close}/64, {:.1}s (limit {}s)",
            el.as_secs_f64(),
            C1_LIMIT.as_secs()
        ),
    );
    o.details = details;
    o
}

fn c2_table2() -> Outcome {
    let t0 = Instant::now();
    let mc = McConfig::new(C2_SAMPLES, 1, 0).unwrap();
    let mut ok = 0;
    let mut details = Vec::new();
    for (s, reference) in [(qpsk(), &T2_QPSK_OPT), (psk8(), &T2_8PSK_OPT)] {
        for (i, &snr) in SNR_T2.iter().enumerate() {
            let (p1, p2) = powers(snr, 1.0);
            let r = alpha_opt(&s, &s, p1, p2, 1.0, &alpha_grid(), &mc, PhaseModel::None).unwrap();
            let (cp, sp) = cpa(&s, &s, snr, 1.0, reference[i], PhaseModel::None, &mc);
            let dev = (r.alpha - reference[i]).abs();
            let gap = cp - r.capacity.bits;
            let slack = C2_CAP_TOL + K_SIGMA * rss(sp, r.capacity.stderr);
            let pass = dev <= C2_ALPHA_TOL + 1e-9 || gap <= slack;
            ok += pass as usize;
            details.push(format!(
                "{} {snr:>4} dB: α_opt={:.2} ref {:.2}, C(ref)-C(ours)={gap:+.4} (slack {slack:.4}) {}",
                s.label(),
                r.alpha,
                reference[i],
                if pass { "ok" } else { "MISS" }
            ));
        }
    }
    let el = t0.elapsed();
    let mut o = Outcome::new(
        ok == 14 && el < C2_LIMIT,
        format!("{ok}/14 cells within α±{C2_ALPHA_TOL} or capacity gap ≤ {C2_CAP_TOL}+3σ, {:.0}s (limit {}s)", el.as_secs_f64(), C2_LIMIT.as_secs()),
    );
    o.details = details;
    o
}

fn c3_table3() -> Outcome {
    let t0 = Instant::now();
    let avg = PhaseAverage::new(C3_DRAWS, 0);
    let mp = MetricPhase::Random(avg);
    let mut ok = 0;
    let mut details = Vec::new();
    for (s, reference, gated) in [(qpsk(), &T3_QPSK, true), (psk8(), &T3_8PSK, true), (make_8qam(), &T3_8QAM, false)] {
        let mut ours_col = Vec::new();
        for (i, &snr) in SNR_T3.iter().enumerate() {
            let (p1, p2) = powers(snr, 1.0);
            let obj = alpha_objectives(&s, &s, p1, p2, 1.0, &alpha_grid(), &mp).unwrap();
            let best = obj.iter().cloned().reduce(|a, b| if b.1 < a.1 { b } else { a }).unwrap();
            let at_ref = obj.iter().find(|o| (o.0 - reference[i]).abs() < 1e-9).copied().unwrap();
            let pass = best.1 <= at_ref.1 + K_SIGMA * at_ref.2;
            if gated {
                ok += pass as usize;
            }
            ours_col.push(format!("{:.2}", best.0));
        }
        details.push(format!(
            "{}{}: α* = [{}] ref {:?}",
            s.label(),
            if gated { "" } else { " (not gated)" },
            ours_col.join(", "),
            reference
        ));
    }
    let el = t0.elapsed();
    let mut o = Outcome::new(
        ok == 14 && el < C3_LIMIT,
        format!(
            "{ok}/14 QPSK/8-PSK cells with ΣQ_p(ours) ≤ ΣQ_p(ref)+3σ at {C3_DRAWS} draws, {:.0}s (limit {}s)",
            el.as_secs_f64(),
            C3_LIMIT.as_secs()
        ),
    );
    o.details = details;
    o
}

fn c4_fig12() -> Outcome {
    let mc = McConfig::new(20_000, 1, 0).unwrap();
    let g = SearchGrids::default();
    let (mut ok, mut n) = (0, 0);
    let mut details = Vec::new();
    for s in [qpsk(), psk8()] {
        for snr in [4.0, 8.0, 12.0, 16.0, 20.0] {
            let (p1, p2) = powers(snr, 1.0);
            let a = alpha_star(&s, &s, p1, p2, 1.0, &g.alpha, &MetricPhase::None).unwrap();
            let t = theta_star(&s, &s, p1, p2, 1.0, &g.theta_deg).unwrap();
            let (c_cpa, se_cpa) = cpa(&s, &s, snr, 1.0, a.alpha, PhaseModel::None, &mc);
            let (c_base, se_base) = cpa(&s, &s, snr, 1.0, 1.0, PhaseModel::None, &mc);
            let (c_cr, _) = cpa(&s, &s.rotated(t.theta), snr, 1.0, 1.0, PhaseModel::None, &mc);
            let pass = c_cpa >= c_base - K_SIGMA * rss(se_cpa, se_base) && (c_cpa - c_cr).abs() <= C4_CR_TOL;
            ok += pass as usize;
            n += 1;
            details.push(format!(
                "{} {snr:>4} dB: CPA {c_cpa:.4} (α*={:.2}) base {c_base:.4} CR {c_cr:.4} (θ*={:.0}°) {}",
                s.label(),
                a.alpha,
                t.theta.to_degrees(),
                if pass { "ok" } else { "MISS" }
            ));
        }
    }
    let mut o = Outcome::new(ok == n, format!("{ok}/{n} points with CPA ≥ baseline−3σ and |CPA−CR| ≤ {C4_CR_TOL}"));
    o.details = details;
    o
}

fn c5_fig56() -> Outcome {
    let mc = McConfig::new(20_000, 1_000, 0).unwrap();
    let (mut ok, mut n) = (0, 0);
    let mut details = Vec::new();
    for s in [qpsk(), psk8()] {
        for snr in [15.0, 20.0, 25.0] {
            let (p1, p2) = powers(snr, 1.0);
            let mp = MetricPhase::Random(PhaseAverage::new(mc.phase_draws, mc.seed));
            let a = alpha_star(&s, &s, p1, p2, 1.0, &alpha_grid(), &mp).unwrap();
            let (c_cpa, se_cpa) = cpa(&s, &s, snr, 1.0, a.alpha, PhaseModel::RandomUniform, &mc);
            let (c_one, se_one) = cpa(&s, &s, snr, 1.0, 1.0, PhaseModel::RandomUniform, &mc);
            let slack = K_SIGMA * rss(se_cpa, se_one);
            let strict = s.label() == "qpsk" && snr >= 20.0;
            let pass = if strict { c_cpa - c_one > slack } else { c_cpa >= c_one - slack };
            ok += pass as usize;
            n += 1;
            details.push(format!(
                "{} {snr:>4} dB: CPA {c_cpa:.4} (α*={:.2}) α=1 {c_one:.4} 3σ={slack:.4}{} {}",
                s.label(),
                a.alpha,
                if strict { " strict" } else { "" },
                if pass { "ok" } else { "MISS" }
            ));
        }
    }
    let mut o = Outcome::new(ok == n, format!("{ok}/{n} random-phase points with CPA ≥ α=1 (strictly, beyond 3σ, for QPSK ≥ 20 dB)"));
    o.details = details;
    o
}

fn c6_unequal() -> Outcome {
    let mc = McConfig::new(20_000, 1_000, 0).unwrap();
    let s = qpsk();
    let mut details = Vec::new();
    let mut pass = true;
    for phase in [PhaseModel::None, PhaseModel::RandomUniform] {
        let mp = match phase {
            PhaseModel::RandomUniform => MetricPhase::Random(PhaseAverage::new(mc.phase_draws, mc.seed)),
            _ => MetricPhase::None,
        };
        let mut gains = Vec::new();
        for ratio in [0.9, 0.5] {
            let (p1, p2) = powers(20.0, ratio);
            let a = alpha_star(&s, &s, p1, p2, 1.0, &alpha_grid(), &mp).unwrap();
            let (c, _) = cpa(&s, &s, 20.0, ratio, a.alpha, phase, &mc);
            let (b, _) = cpa(&s, &s, 20.0, ratio, 1.0, phase, &mc);
            gains.push(c - b);
        }
        let ok = gains[0] > gains[1];
        pass &= ok;
        details.push(format!(
            "{}: gain(P2=0.9P1)={:.4} gain(P2=0.5P1)={:.4} {}",
            if phase == PhaseModel::None { "no phase" } else { "random phase" },
            gains[0],
            gains[1],
            if ok { "ok" } else { "MISS" }
        ));
    }
    let mut o = Outcome::new(pass, "CPA gain at 20 dB larger for P2=0.9P1 than P2=0.5P1 (with and without random phase)");
    o.details = details;
    o
}

fn c7_jensen() -> Outcome {
    let mc = McConfig::new(2_000, 1, 0).unwrap();
    let (mut viol, mut n) = (0, 0);
    let mut details = Vec::new();
    for s in [qpsk(), psk8()] {
        for snr in [0.0, 10.0, 20.0] {
            let p = powers(snr, 1.0).0;
            for k in 1..=10 {
                let alpha = k as f64 / 10.0;
                for ab in [alpha, 2.0 - alpha] {
                    let q = q_metric(&s, &s, p, p, ab, 1.0).unwrap();
                    let (i1, se) = i1_estimate(&s, &s, q.scales_echo.0, q.scales_echo.1, 1.0, &mc).unwrap();
                    n += 1;
                    if i1 > q.value + K_SIGMA * se {
                        viol += 1;
                        details.push(format!("{} {snr} dB ᾱ={ab}: I1={i1} > Q={}", s.label(), q.value));
                    }
                }
            }
        }
    }
    let mut o = Outcome::new(viol == 0, format!("{viol} violations of I1 ≤ Q+3σ over {n} (constellation, ᾱ, SNR) cases"));
    o.details = details;
    o
}

fn c8_oracle() -> Outcome {
    let mc = McConfig::new(20_000, 1, 0).unwrap();
    let (mut ok, mut n) = (0, 0);
    let mut details = Vec::new();
    for s in [make_psk(2).unwrap(), qpsk()] {
        for snr in [0.0, 10.0, 20.0] {
            let p = powers(snr, 1.0).0;
            // Equal-power pairs are gated. The unequal CPA slot is reported
            // only: at high SNR its residual comes from noise excursions too
            // rare for 20 000 samples to see, so the sample stderr is not a
            // valid error bar there.
            for (alpha, gated) in [(1.0, true), (0.4, false)] {
                let (a1, a2) = (((2.0 - alpha) * p).sqrt(), (alpha * p).sqrt());
                let est = cc_sum_capacity(&s, &s, a1, a2, &ChannelSpec::awgn(1.0), &mc).unwrap();
                let oracle = common::capacity_gh(s.points(), s.points(), a1, a2, 1.0, 64);
                let diff = (est.bits - oracle).abs();
                let pass = diff <= K_SIGMA * est.stderr;
                if gated {
                    ok += pass as usize;
                    n += 1;
                }
                details.push(format!(
                    "{} {snr:>4} dB ᾱ={alpha}: MC {:.6} ± {:.1e}, quadrature {oracle:.6}, |Δ|={diff:.1e} {}",
                    s.label(),
                    est.bits,
                    est.stderr,
                    match (gated, pass) {
                        (true, true) => "ok",
                        (true, false) => "MISS",
                        (false, true) => "ok (not gated)",
                        (false, false) => "outside 3σ (not gated)",
                    }
                ));
            }
        }
    }
    let mut o = Outcome::new(ok == n, format!("{ok}/{n} equal-power BPSK/QPSK pair capacities within 3σ of the Gauss–Hermite oracle"));
    o.details = details;
    o
}

fn c9_demap() -> Outcome {
    let s = make_qam(16).unwrap();
    let p: f64 = 10.0;
    let mut mismatches = 0;
    let mut counts = (0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for alpha in [0.43, 0.74, 1.0] {
        let (al, as_) = (((2.0 - alpha) * p).sqrt(), (alpha * p).sqrt());
        let sum = sum_constellation(&s, &s, al, as_);
        let pi = PamProjection::new(&s, &s, al, as_, Axis::InPhase).unwrap();
        let pq = PamProjection::new(&s, &s, al, as_, Axis::Quadrature).unwrap();
        let mut check = |y: ComplexPoint| {
            let j = joint_ml_demap(y, &sum);
            let r = separable_ml_demap(y, &pi, &pq).unwrap();
            counts = (r.candidates, j.candidates);
            checked += 1;
            if (j.k1, j.k2) != (r.k1, r.k2) {
                mismatches += 1;
            }
        };
        for &y in sum.points() {
            check(y);
        }
        for _ in 0..C9_NOISY {
            let k = rng.random_range(0..sum.len());
            let g1: f64 = rng.sample(StandardNormal);
            let g2: f64 = rng.sample(StandardNormal);
            check(sum.points()[k] + ComplexPoint::new(g1, g2) * 0.5f64.sqrt());
        }
    }
    Outcome::new(
        mismatches == 0 && counts == (32, 256),
        format!(
            "{mismatches} separable/joint mismatches over {checked} symbols; candidates per symbol {} vs {}",
            counts.0, counts.1
        ),
    )
}

fn c10_partition() -> Outcome {
    let s = make_qam(16).unwrap();
    let pam = PamAlphabet::from_qam(&s, Axis::InPhase).unwrap();
    let d = 10f64.sqrt().recip();
    let is_ungerboeck = |v: &[f64], w: &[f64]| {
        let eq = |a: &[f64], b: [f64; 2]| a.len() == 2 && a.iter().zip(b).all(|(x, y)| (x - y * d).abs() < 1e-12);
        eq(v, [-3.0, 1.0]) && eq(w, [-1.0, 3.0])
    };
    let run = |rule: PartitionRule| {
        let mut hits = 0;
        let mut misses = Vec::new();
        for (i, &snr) in SNR_T1.iter().enumerate() {
            let alpha = T1_16QAM[i];
            let p = powers(snr, 1.0).0;
            let r = best_partition(&pam, &pam, ((2.0 - alpha) * p).sqrt(), (alpha * p).sqrt(), rule).unwrap();
            if is_ungerboeck(&r.user1_split.first, &r.user1_split.second) && is_ungerboeck(&r.user2_split.first, &r.user2_split.second) {
                hits += 1;
            } else {
                misses.push(format!("{snr} dB α*={alpha}"));
            }
        }
        (hits, misses)
    };
    let (hits, _) = run(PartitionRule::default());
    let (lit_hits, lit_misses) = run(PartitionRule::independent_multiset());
    let mut o = Outcome::new(hits == 16, format!("Ungerboeck split for both users at {hits}/16 Table I 16-QAM α* (shared split, set distances)"));
    o.details.push(format!(
        "independent splits on multisets (not gated): {lit_hits}/16; differs at {}",
        lit_misses.join(", ")
    ));
    o
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_cpa-gmac");
    let cases: [&[&str]; 5] = [
        &["capacity", "--constellation", "qpsk", "--scheme", "cpa", "--alpha", "0.43", "--snr-db", "8", "--seed", "7"],
        &["capacity", "--constellation", "8psk", "--scheme", "baseline", "--phase", "random", "--snr-db", "10", "--samples", "4000", "--phase-draws", "100"],
        &["alpha-star", "--constellation", "qpsk", "--phase", "random", "--snr-db", "10,20", "--phase-draws", "200", "--seed", "3"],
        &["alpha-opt", "--constellation", "qpsk", "--snr-db", "8", "--alpha-grid", "0.3:0.05:0.6", "--samples", "4000"],
        &["capacity", "--constellation", "qpsk", "--scheme", "cpa_cr", "--snr-db", "8", "--samples", "2000", "--alpha-grid", "0.1:0.1:1.0", "--theta-grid", "5:5:90"],
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut identical = 0;
    let mut details = Vec::new();
    for (ci, args) in cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for threads in [1, 4, 16] {
            let out = dir.path().join(format!("c{ci}_t{threads}.csv"));
            let status = Command::new(bin)
                .args(*args)
                .arg("--out")
                .arg(&out)
                .arg("--threads")
                .arg(threads.to_string())
                .status()
                .expect("binary runs");
            assert!(status.success(), "{args:?} failed");
            outputs.push(std::fs::read(&out).unwrap());
        }
        let same = outputs.windows(2).all(|w| w[0] == w[1]);
        identical += same as usize;
        details.push(format!("{}: {}", args.join(" "), if same { "identical" } else { "DIFFERENT" }));
    }
    let mut o = Outcome::new(
        identical == cases.len(),
        format!("{identical}/{} commands byte-identical under 1, 4 and 16 workers", cases.len()),
    );
    o.details = details;
    o
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let gates: [(&str, &str, fn() -> Outcome); 11] = [
        ("c1", "Table I α*", c1_table1),
        ("c2", "Table II α_opt", c2_table2),
        ("c3", "Table III random-phase α*", c3_table3),
        ("c4", "Fig. 1/2 scheme ordering", c4_fig12),
        ("c5", "Fig. 5/6 random-phase ordering", c5_fig56),
        ("c6", "Fig. 4/7 unequal-power trend", c6_unequal),
        ("c7", "Jensen bound", c7_jensen),
        ("c8", "quadrature oracle", c8_oracle),
        ("c9", "demap equivalence", c9_demap),
        ("c10", "set partition", c10_partition),
        ("c11", "determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (id, name, gate) in gates {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let t0 = Instant::now();
        let o = gate();
        println!(
            "[{}] {id:>3} {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            t0.elapsed().as_secs_f64()
        );
        for d in &o.details {
            println!("        {d}");
        }
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
