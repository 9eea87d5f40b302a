//! Deterministic surrogate objectives for the CPA split factor.
//!
//! `Q(ᾱ)` upper-bounds the noise-averaged log-sum that separates the sum
//! capacity from `log₂(N₁N₂)`, and tracks it closely at high SNR:
//!
//! ```text
//! Q(ᾱ) = Σ_k log₂ Σ_i exp(−|√P_L Δx₁ + √P_S Δx₂|² / 2σ²),   P_L = (2−ᾱ)P₁, P_S = ᾱP₂
//! ```
//!
//! Minimizing `Q(α) + Q(2−α)` over the α grid gives `α*`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{draw_phases, pooled_moments, DiffTables, McConfig, Mu, Term};
use crate::constellation::Constellation;
use crate::error::{invalid, Result};
use crate::math::{log_sum_exp_in_place, Moments};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    /// log₂ units; `0 ≤ value ≤ N₁N₂·log₂(N₁N₂)`.
    pub value: f64,
    /// Standard error for sampled (phase-averaged) metrics, zero otherwise.
    pub stderr: f64,
    pub alpha_bar: f64,
    /// `(P_L, P_S)`.
    pub scales_echo: (f64, f64),
}

/// Phase-averaging budget for [`qp_metric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseAverage {
    pub draws: usize,
    pub seed: u64,
    /// Fix `θ₁ = 0` and draw only `θ₂`. Valid when the metric depends on the
    /// offsets only through `θ₂ − θ₁` (e.g. PSK inputs).
    pub fix_theta1: bool,
}

impl PhaseAverage {
    pub fn new(draws: usize, seed: u64) -> Self {
        Self {
            draws,
            seed,
            fix_theta1: false,
        }
    }
}

fn check(alpha_bar: f64, sigma2: f64, p1: f64, p2: f64) -> Result<()> {
    if !(alpha_bar > 0.0 && alpha_bar < 2.0) {
        return Err(invalid(format!("alpha_bar must lie in (0, 2), got {alpha_bar}")));
    }
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(invalid(format!("noise variance must be positive, got {sigma2}")));
    }
    if !(p1 > 0.0 && p1.is_finite()) || !(p2 > 0.0 && p2.is_finite()) {
        return Err(invalid(format!("power budgets must be positive, got P1={p1}, P2={p2}")));
    }
    Ok(())
}

/// `(P_L, P_S) = ((2−ᾱ)P₁, ᾱP₂)`.
pub fn slot_powers(p1: f64, p2: f64, alpha_bar: f64) -> (f64, f64) {
    ((2.0 - alpha_bar) * p1, alpha_bar * p2)
}

/// `Σ_k log₂ Σ_i exp(−|μ(k,i)|²/2σ²)` for the given difference tables.
fn log_sum_total(tables: &DiffTables, sigma2: f64) -> f64 {
    let scale = -0.5 / sigma2;
    let mut mu = Mu::default();
    let mut exps = Vec::new();
    let mut total = 0.0;
    for k in 0..tables.pairs() {
        tables.fill_mu(k, &mut mu);
        exps.clear();
        exps.extend(mu.re.iter().zip(&mu.im).map(|(r, i)| (r * r + i * i) * scale));
        total += log_sum_exp_in_place(&mut exps) * std::f64::consts::LOG2_E;
    }
    total
}

fn rotated_value(s1: &Constellation, s2: &Constellation, p1: f64, p2: f64, alpha_bar: f64, theta1: f64, theta2: f64, sigma2: f64) -> f64 {
    let (pl, ps) = slot_powers(p1, p2, alpha_bar);
    let tables = DiffTables::new(s1.points(), s2.points(), pl.sqrt(), ps.sqrt(), theta1, theta2);
    log_sum_total(&tables, sigma2)
}

/// `Q(ᾱ)`; fully deterministic.
pub fn q_metric(s1: &Constellation, s2: &Constellation, p1: f64, p2: f64, alpha_bar: f64, sigma2: f64) -> Result<MetricValue> {
    q_metric_rotated(s1, s2, p1, p2, alpha_bar, 0.0, sigma2)
}

/// `Q(ᾱ)` with user 2's constellation rotated by `theta`.
pub fn q_metric_rotated(s1: &Constellation, s2: &Constellation, p1: f64, p2: f64, alpha_bar: f64, theta: f64, sigma2: f64) -> Result<MetricValue> {
    check(alpha_bar, sigma2, p1, p2)?;
    if !theta.is_finite() {
        return Err(invalid("rotation angle must be finite"));
    }
    Ok(MetricValue {
        value: rotated_value(s1, s2, p1, p2, alpha_bar, 0.0, theta, sigma2),
        stderr: 0.0,
        alpha_bar,
        scales_echo: slot_powers(p1, p2, alpha_bar),
    })
}

/// `Q(α) + Q(2 − α)`.
pub fn q_total(s1: &Constellation, s2: &Constellation, p1: f64, p2: f64, alpha: f64, sigma2: f64) -> Result<f64> {
    q_total_rotated(s1, s2, p1, p2, alpha, 0.0, sigma2)
}

/// `Q(α) + Q(2 − α)` with user 2 rotated by `theta`.
pub fn q_total_rotated(s1: &Constellation, s2: &Constellation, p1: f64, p2: f64, alpha: f64, theta: f64, sigma2: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let a = q_metric_rotated(s1, s2, p1, p2, alpha, theta, sigma2)?;
    let b = q_metric_rotated(s1, s2, p1, p2, 2.0 - alpha, theta, sigma2)?;
    Ok(a.value + b.value)
}

/// Per-draw values of `Σ_{ᾱ ∈ alpha_bars} Q(ᾱ | θ₁, θ₂)`, in draw order.
pub(crate) fn qp_draw_values(
    s1: &Constellation,
    s2: &Constellation,
    p1: f64,
    p2: f64,
    alpha_bars: &[f64],
    sigma2: f64,
    avg: &PhaseAverage,
) -> Vec<f64> {
    (0..avg.draws)
        .into_par_iter()
        .map(|d| {
            let (mut t1, mut t2) = draw_phases(avg.seed, d);
            if avg.fix_theta1 {
                t2 = (t2 - t1).rem_euclid(std::f64::consts::TAU);
                t1 = 0.0;
            }
            alpha_bars
                .iter()
                .map(|&ab| rotated_value(s1, s2, p1, p2, ab, t1, t2, sigma2))
                .sum()
        })
        .collect()
}

/// `Q_p(ᾱ)`: `Q(ᾱ)` with per-user phase rotations, averaged over i.i.d.
/// uniform offsets. Deterministic for a fixed seed.
pub fn qp_metric(s1: &Constellation, s2: &Constellation, p1: f64, p2: f64, alpha_bar: f64, sigma2: f64, avg: &PhaseAverage) -> Result<MetricValue> {
    check(alpha_bar, sigma2, p1, p2)?;
    if avg.draws == 0 {
        return Err(invalid("phase draws must be at least 1"));
    }
    let m = moments(&qp_draw_values(s1, s2, p1, p2, &[alpha_bar], sigma2, avg));
    Ok(MetricValue {
        value: m.mean(),
        stderr: m.stderr(),
        alpha_bar,
        scales_echo: slot_powers(p1, p2, alpha_bar),
    })
}

pub(crate) fn moments(values: &[f64]) -> Moments {
    let mut m = Moments::default();
    for &v in values {
        m.push(v);
    }
    m
}

/// Monte-Carlo estimate of `Σ_k E_z[log₂ Σ_i exp(−|μ(k,i) + z|²/σ²)]` at
/// powers `(P_L, P_S)`, with its standard error.
///
/// Uses the same noise streams as the capacity estimator at scales
/// `(√P_L, √P_S)` with the same seed.
pub fn i1_estimate(s1: &Constellation, s2: &Constellation, p_l: f64, p_s: f64, sigma2: f64, mc: &McConfig) -> Result<(f64, f64)> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(invalid(format!("noise variance must be positive, got {sigma2}")));
    }
    if !(p_l >= 0.0 && p_s >= 0.0) {
        return Err(invalid("powers must be non-negative"));
    }
    mc.validate()?;
    let tables = DiffTables::new(s1.points(), s2.points(), p_l.sqrt(), p_s.sqrt(), 0.0, 0.0);
    let m = pooled_moments(&tables, sigma2, mc.noise_samples, Term::LogSum, mc.seed, 0, 0);
    let n = tables.pairs() as f64;
    Ok((n * m.mean(), n * m.stderr()))
}
