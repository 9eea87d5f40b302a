//! Monte-Carlo estimation of the constellation-constrained sum capacity.
//!
//! For a sum constellation with `N = N₁N₂` points the sum capacity is
//!
//! ```text
//! I = log₂N − (1/N) Σ_k E_z[ log₂ Σ_i exp(−|μ(k,i) + z|²/σ²) + |z|²·log₂e/σ² ]
//! ```
//!
//! with `μ(k,i)` the difference between sum points `k` and `i`. The
//! expectation over `z ~ CSCG(0, σ²)` is replaced by a sample mean, each
//! `(pair, block, slot, phase draw)` work item drawing from its own seeded
//! stream so that results are bit-identical for any thread count.

use std::f64::consts::{LOG2_E, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constellation::{ComplexPoint, Constellation};
use crate::error::{invalid, Result};
use crate::math::{log_sum_exp_in_place, Moments};
use crate::seed;

/// Noise samples drawn from one seeded stream.
pub const NOISE_BLOCK: usize = 2_000;

pub const DEFAULT_NOISE_SAMPLES: usize = 20_000;
pub const DEFAULT_PHASE_DRAWS: usize = 1_000;

/// Phase offsets applied by the channel to the two users.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseModel {
    None,
    Fixed { theta1: f64, theta2: f64 },
    RandomUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    /// Total complex noise variance; σ²/2 per real dimension.
    pub sigma2: f64,
    pub phase: PhaseModel,
}

impl ChannelSpec {
    pub fn new(sigma2: f64, phase: PhaseModel) -> Result<Self> {
        let ch = Self { sigma2, phase };
        ch.validate()?;
        Ok(ch)
    }

    pub fn awgn(sigma2: f64) -> Self {
        Self {
            sigma2,
            phase: PhaseModel::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(invalid(format!("noise variance must be positive, got {}", self.sigma2)));
        }
        if let PhaseModel::Fixed { theta1, theta2 } = self.phase {
            if !theta1.is_finite() || !theta2.is_finite() {
                return Err(invalid("fixed phase offsets must be finite"));
            }
        }
        Ok(())
    }
}

/// Sampling budget.
///
/// Under random phase offsets `noise_samples` is the total number of noise
/// draws per symbol pair, spread evenly over the `phase_draws` phase pairs
/// (at least one per draw).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub noise_samples: usize,
    pub phase_draws: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            noise_samples: DEFAULT_NOISE_SAMPLES,
            phase_draws: DEFAULT_PHASE_DRAWS,
            seed: 0,
        }
    }
}

impl McConfig {
    pub fn new(noise_samples: usize, phase_draws: usize, seed: u64) -> Result<Self> {
        let mc = Self {
            noise_samples,
            phase_draws,
            seed,
        };
        mc.validate()?;
        Ok(mc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.noise_samples == 0 {
            return Err(invalid("noise_samples must be at least 1"));
        }
        if self.phase_draws == 0 {
            return Err(invalid("phase_draws must be at least 1"));
        }
        Ok(())
    }

    /// Noise draws per symbol pair within one phase draw.
    pub fn samples_per_draw(&self) -> usize {
        self.noise_samples.div_ceil(self.phase_draws).max(1)
    }
}

/// Inputs that produced an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub constellations: (String, String),
    pub scales: Vec<(f64, f64)>,
    pub channel: ChannelSpec,
    pub mc: McConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    /// Bits per complex channel use.
    pub bits: f64,
    pub stderr: f64,
    /// Noise samples consumed.
    pub samples: u64,
    pub config_echo: ConfigEcho,
}

/// Constellation power allocation: the two users trade scale factors between
/// odd and even channel uses while keeping their average powers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpaConfig {
    pub p1: f64,
    pub p2: f64,
    pub alpha: f64,
}

impl CpaConfig {
    pub fn new(p1: f64, p2: f64, alpha: f64) -> Result<Self> {
        if !(p1 > 0.0 && p1.is_finite()) || !(p2 > 0.0 && p2.is_finite()) {
            return Err(invalid(format!("power budgets must be positive, got P1={p1}, P2={p2}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(invalid(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { p1, p2, alpha })
    }

    /// `Ω = {α, 2 − α}`.
    pub fn omega(&self) -> [f64; 2] {
        [self.alpha, 2.0 - self.alpha]
    }

    /// Per-slot scales `(√((2−ᾱ)P₁), √(ᾱP₂))` for `ᾱ ∈ Ω`: odd slot first.
    pub fn slot_scales(&self) -> [(f64, f64); 2] {
        self.omega().map(|ab| slot_scales(self.p1, self.p2, ab))
    }
}

/// Scales `(√((2−ᾱ)P₁), √(ᾱP₂))` seen in the slot with split factor `ᾱ`.
pub fn slot_scales(p1: f64, p2: f64, alpha_bar: f64) -> (f64, f64) {
    (((2.0 - alpha_bar) * p1).sqrt(), (alpha_bar * p2).sqrt())
}

/// Which per-sample quantity the kernel averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Term {
    /// `log₂ Σ exp(−|μ+z|²/σ²) + |z|²·log₂e/σ²`.
    Capacity,
    /// `log₂ Σ exp(−|μ+z|²/σ²)` alone.
    LogSum,
}

/// Scaled, rotated per-user difference tables `u[k][i] = w·a·(x(k) − x(i))`.
pub(crate) struct DiffTables {
    u1: Vec<Complex64>,
    u2: Vec<Complex64>,
    n1: usize,
    n2: usize,
}

impl DiffTables {
    pub(crate) fn new(x1: &[ComplexPoint], x2: &[ComplexPoint], a1: f64, a2: f64, theta1: f64, theta2: f64) -> Self {
        let w1 = rotation(theta1) * a1;
        let w2 = rotation(theta2) * a2;
        let table = |x: &[ComplexPoint], w: Complex64| -> Vec<Complex64> {
            x.iter()
                .flat_map(|&xk| x.iter().map(move |&xi| w * (xk - xi)))
                .collect()
        };
        Self {
            u1: table(x1, w1),
            u2: table(x2, w2),
            n1: x1.len(),
            n2: x2.len(),
        }
    }

    pub(crate) fn pairs(&self) -> usize {
        self.n1 * self.n2
    }

    /// `μ(k, ·)` for the flattened pair `k`, row-major over `(i₁, i₂)`.
    pub(crate) fn fill_mu(&self, k: usize, out: &mut Mu) {
        let (k1, k2) = (k / self.n2, k % self.n2);
        let r1 = &self.u1[k1 * self.n1..(k1 + 1) * self.n1];
        let r2 = &self.u2[k2 * self.n2..(k2 + 1) * self.n2];
        out.re.clear();
        out.im.clear();
        for &d1 in r1 {
            out.re.extend(r2.iter().map(|d2| d1.re + d2.re));
            out.im.extend(r2.iter().map(|d2| d1.im + d2.im));
        }
    }
}

/// Differences `μ(k, i)` for one `k`, split into real and imaginary parts.
#[derive(Debug, Default, Clone)]
pub(crate) struct Mu {
    pub(crate) re: Vec<f64>,
    pub(crate) im: Vec<f64>,
}

impl Mu {
    pub(crate) fn len(&self) -> usize {
        self.re.len()
    }
}

/// `e^{iθ}`, exactly `1` for `θ = 0`.
fn rotation(theta: f64) -> Complex64 {
    if theta == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, theta)
    }
}

/// Sample-mean accumulation of one per-sample term for pair `k`.
pub(crate) fn accumulate_pair<R: Rng>(mu: &Mu, sigma2: f64, samples: usize, term: Term, rng: &mut R, exps: &mut Vec<f64>) -> Moments {
    let inv_s2 = sigma2.recip();
    let noise_scale = (sigma2 / 2.0).sqrt();
    let mut m = Moments::default();
    exps.resize(mu.len(), 0.0);
    for _ in 0..samples {
        let g1: f64 = rng.sample(StandardNormal);
        let g2: f64 = rng.sample(StandardNormal);
        let (zr, zi) = (noise_scale * g1, noise_scale * g2);
        for ((e, &dr), &di) in exps.iter_mut().zip(&mu.re).zip(&mu.im) {
            let (vr, vi) = (dr + zr, di + zi);
            *e = -(vr * vr + vi * vi) * inv_s2;
        }
        let lse = log_sum_exp_in_place(exps);
        let t = match term {
            Term::Capacity => (lse + (zr * zr + zi * zi) * inv_s2) * LOG2_E,
            Term::LogSum => lse * LOG2_E,
        };
        m.push(t);
    }
    m
}

/// Pooled per-sample moments over every pair, for one slot and phase draw.
pub(crate) fn pooled_moments(tables: &DiffTables, sigma2: f64, samples: usize, term: Term, seed: u64, slot: usize, draw: usize) -> Moments {
    let blocks = samples.div_ceil(NOISE_BLOCK);
    let items: Vec<(usize, usize)> = (0..tables.pairs())
        .flat_map(|k| (0..blocks).map(move |b| (k, b)))
        .collect();
    let parts: Vec<Moments> = items
        .par_iter()
        .map_init(
            || (Mu::default(), Vec::new()),
            |(mu, exps), &(k, b)| {
                tables.fill_mu(k, mu);
                let n = NOISE_BLOCK.min(samples - b * NOISE_BLOCK);
                let (k1, k2) = (k / tables.n2, k % tables.n2);
                let mut rng = seed::noise_rng(seed, k1, k2, b, slot, draw);
                accumulate_pair(mu, sigma2, n, term, &mut rng, exps)
            },
        )
        .collect();
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    total
}

/// Capacity from pooled moments of [`Term::Capacity`].
fn capacity_from(n_points: usize, m: &Moments) -> (f64, f64) {
    let bits = ((n_points as f64).log2() - m.mean()).max(0.0);
    (bits, m.stderr())
}

fn echo(s1: &Constellation, s2: &Constellation, scales: Vec<(f64, f64)>, ch: &ChannelSpec, mc: &McConfig) -> ConfigEcho {
    ConfigEcho {
        constellations: (s1.label().to_string(), s2.label().to_string()),
        scales,
        channel: *ch,
        mc: *mc,
    }
}

fn check_scales(a1: f64, a2: f64) -> Result<()> {
    if !(a1 >= 0.0 && a1.is_finite() && a2 >= 0.0 && a2.is_finite()) {
        return Err(invalid(format!("scales must be finite and non-negative, got ({a1}, {a2})")));
    }
    Ok(())
}

/// Fixed-offset estimator for one CPA slot.
fn slot_fixed(
    s1: &Constellation,
    s2: &Constellation,
    a1: f64,
    a2: f64,
    theta1: f64,
    theta2: f64,
    sigma2: f64,
    mc: &McConfig,
    slot: usize,
) -> (f64, f64, u64) {
    let tables = DiffTables::new(s1.points(), s2.points(), a1, a2, theta1, theta2);
    let m = pooled_moments(&tables, sigma2, mc.noise_samples, Term::Capacity, mc.seed, slot, 0);
    let (bits, se) = capacity_from(tables.pairs(), &m);
    (bits, se, m.count)
}

/// Random-phase estimator for one CPA slot.
fn slot_random(s1: &Constellation, s2: &Constellation, a1: f64, a2: f64, sigma2: f64, mc: &McConfig, slot: usize) -> (f64, f64, u64) {
    let n = s1.len() * s2.len();
    let per_draw = mc.samples_per_draw();
    let mut across = Moments::default();
    let mut within_var = 0.0;
    let mut count = 0;
    for draw in 0..mc.phase_draws {
        let (theta1, theta2) = draw_phases(mc.seed, draw);
        let tables = DiffTables::new(s1.points(), s2.points(), a1, a2, theta1, theta2);
        let m = pooled_moments(&tables, sigma2, per_draw, Term::Capacity, mc.seed, slot, draw);
        let (bits, se) = capacity_from(n, &m);
        across.push(bits);
        within_var += se * se;
        count += m.count;
    }
    let d = mc.phase_draws as f64;
    let se = if mc.phase_draws >= 2 {
        across.stderr()
    } else {
        (within_var / (d * d)).sqrt()
    };
    (across.mean(), se, count)
}

/// Phase pair `(θ₁, θ₂)`, i.i.d. uniform on `[0, 2π)`, for draw `draw`.
pub fn draw_phases(seed: u64, draw: usize) -> (f64, f64) {
    let mut rng = seed::phase_rng(seed, draw);
    let t1: f64 = rng.random::<f64>() * 2.0 * PI;
    let t2: f64 = rng.random::<f64>() * 2.0 * PI;
    (t1, t2)
}

fn slot_estimate(s1: &Constellation, s2: &Constellation, a1: f64, a2: f64, ch: &ChannelSpec, mc: &McConfig, slot: usize) -> (f64, f64, u64) {
    match ch.phase {
        PhaseModel::None => slot_fixed(s1, s2, a1, a2, 0.0, 0.0, ch.sigma2, mc, slot),
        PhaseModel::Fixed { theta1, theta2 } => slot_fixed(s1, s2, a1, a2, theta1, theta2, ch.sigma2, mc, slot),
        PhaseModel::RandomUniform => slot_random(s1, s2, a1, a2, ch.sigma2, mc, slot),
    }
}

/// Sum capacity at scales `(a1, a2)` without phase offsets.
pub fn cc_sum_capacity(s1: &Constellation, s2: &Constellation, a1: f64, a2: f64, ch: &ChannelSpec, mc: &McConfig) -> Result<CapacityEstimate> {
    if ch.phase != PhaseModel::None {
        return Err(invalid("cc_sum_capacity expects a channel without phase offsets; use sum_capacity"));
    }
    sum_capacity(s1, s2, a1, a2, ch, mc)
}

/// Sum capacity conditioned on the phase offsets `(θ₁, θ₂)`.
pub fn cc_sum_capacity_phase(
    s1: &Constellation,
    s2: &Constellation,
    a1: f64,
    a2: f64,
    theta1: f64,
    theta2: f64,
    ch: &ChannelSpec,
    mc: &McConfig,
) -> Result<CapacityEstimate> {
    let fixed = ChannelSpec {
        sigma2: ch.sigma2,
        phase: PhaseModel::Fixed { theta1, theta2 },
    };
    sum_capacity(s1, s2, a1, a2, &fixed, mc)
}

/// Sum capacity averaged over i.i.d. uniform phase offsets.
pub fn cc_sum_capacity_random_phase(s1: &Constellation, s2: &Constellation, a1: f64, a2: f64, ch: &ChannelSpec, mc: &McConfig) -> Result<CapacityEstimate> {
    let random = ChannelSpec {
        sigma2: ch.sigma2,
        phase: PhaseModel::RandomUniform,
    };
    sum_capacity(s1, s2, a1, a2, &random, mc)
}

/// Sum capacity at scales `(a1, a2)` under whatever phase model `ch` carries.
pub fn sum_capacity(s1: &Constellation, s2: &Constellation, a1: f64, a2: f64, ch: &ChannelSpec, mc: &McConfig) -> Result<CapacityEstimate> {
    ch.validate()?;
    mc.validate()?;
    check_scales(a1, a2)?;
    let (bits, stderr, samples) = slot_estimate(s1, s2, a1, a2, ch, mc, 0);
    finite(bits, stderr)?;
    Ok(CapacityEstimate {
        bits,
        stderr,
        samples,
        config_echo: echo(s1, s2, vec![(a1, a2)], ch, mc),
    })
}

/// CPA sum capacity: the mean of the two slot capacities.
pub fn cpa_sum_capacity(s1: &Constellation, s2: &Constellation, cpa: &CpaConfig, ch: &ChannelSpec, mc: &McConfig) -> Result<CapacityEstimate> {
    ch.validate()?;
    mc.validate()?;
    let cpa = CpaConfig::new(cpa.p1, cpa.p2, cpa.alpha)?;
    let scales = cpa.slot_scales();
    let mut bits = 0.0;
    let mut var = 0.0;
    let mut samples = 0;
    for (slot, &(a1, a2)) in scales.iter().enumerate() {
        let (b, se, n) = slot_estimate(s1, s2, a1, a2, ch, mc, slot);
        bits += b;
        var += se * se;
        samples += n;
    }
    let bits = bits / 2.0;
    let stderr = var.sqrt() / 2.0;
    finite(bits, stderr)?;
    Ok(CapacityEstimate {
        bits,
        stderr,
        samples,
        config_echo: echo(s1, s2, scales.to_vec(), ch, mc),
    })
}

fn finite(bits: f64, stderr: f64) -> Result<()> {
    if bits.is_finite() && stderr.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::Numeric(format!("estimate is not finite (bits={bits}, stderr={stderr})")))
    }
}
