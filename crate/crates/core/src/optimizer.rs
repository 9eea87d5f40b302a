//! Grid searches over the split factor α and the rotation θ, and SNR sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{cpa_sum_capacity, CapacityEstimate, ChannelSpec, CpaConfig, McConfig, PhaseModel};
use crate::constellation::Constellation;
use crate::error::{invalid, Error, Result};
use crate::metric::{moments, q_metric_rotated, q_total, q_total_rotated, qp_draw_values, PhaseAverage};

/// Inclusive arithmetic grid `start, start + step, …, stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = Self { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    /// `0.01, 0.02, …, 1.00`.
    pub fn alpha_default() -> Self {
        Self {
            start: 0.01,
            stop: 1.0,
            step: 0.01,
        }
    }

    /// `1°, 2°, …, 90°`.
    pub fn theta_default_deg() -> Self {
        Self {
            start: 1.0,
            stop: 90.0,
            step: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(invalid("grid bounds must be finite"));
        }
        if !(self.step > 0.0) {
            return Err(invalid(format!("grid step must be positive, got {}", self.step)));
        }
        if self.start > self.stop {
            return Err(invalid(format!("grid start {} exceeds stop {}", self.start, self.stop)));
        }
        Ok(())
    }

    /// Grid points, each rounded to 12 decimals so that e.g. `0.37` is the
    /// nearest double to 0.37. Includes `stop` when it lies on the lattice
    /// within `1e-12`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        let mut pts: Vec<f64> = (0..=n)
            .map(|i| round12(self.start + i as f64 * self.step))
            .collect();
        if let Some(&last) = pts.last() {
            if (self.stop - last).abs() <= 1e-12 {
                *pts.last_mut().unwrap() = self.stop;
            }
        }
        pts
    }

    fn check_alpha(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let pts = self.points();
        if pts.iter().any(|&a| !(a > 0.0 && a <= 1.0)) {
            return Err(invalid("alpha grid must lie within (0, 1]"));
        }
        Ok(pts)
    }

    fn check_theta_deg(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let pts = self.points();
        if pts.iter().any(|&t| !(t > 0.0 && t <= 90.0)) {
            return Err(invalid("theta grid must lie within (0°, 90°]"));
        }
        Ok(pts)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `START:STEP:STOP`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid(format!("expected START:STEP:STOP, got '{s}'")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad number '{p}' in grid '{s}'")))
        };
        GridSpec::new(num(parts[0])?, num(parts[2])?, num(parts[1])?)
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// How the α* metric treats carrier phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MetricPhase {
    /// `Q(ᾱ)`.
    None,
    /// `Q(ᾱ)` with both users rotated by known offsets.
    Fixed { theta1: f64, theta2: f64 },
    /// `Q_p(ᾱ)`.
    Random(PhaseAverage),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaStar {
    pub alpha: f64,
    /// `Σ_Ω Q(ᾱ)` (or `Σ_Ω Q_p(ᾱ)`) at `alpha`.
    pub objective: f64,
    /// Zero for deterministic metrics.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaOpt {
    pub alpha: f64,
    pub capacity: CapacityEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaStar {
    /// Radians.
    pub theta: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaThetaStar {
    pub alpha: f64,
    /// Radians.
    pub theta: f64,
    pub objective: f64,
}

/// First index of the minimum; earlier grid points win ties.
fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

fn check_common(p1: f64, p2: f64, sigma2: f64) -> Result<()> {
    if !(p1 > 0.0 && p1.is_finite()) || !(p2 > 0.0 && p2.is_finite()) {
        return Err(invalid(format!("power budgets must be positive, got P1={p1}, P2={p2}")));
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(invalid(format!("noise variance must be positive, got {sigma2}")));
    }
    Ok(())
}

/// `Σ_Ω Q` over the α grid, with per-point standard errors.
pub fn alpha_objectives(
    s1: &Constellation,
    s2: &Constellation,
    p1: f64,
    p2: f64,
    sigma2: f64,
    grid: &GridSpec,
    phase: &MetricPhase,
) -> Result<Vec<(f64, f64, f64)>> {
    check_common(p1, p2, sigma2)?;
    let alphas = grid.check_alpha()?;
    let out = match *phase {
        MetricPhase::None => alphas
            .par_iter()
            .map(|&a| q_total(s1, s2, p1, p2, a, sigma2).map(|q| (a, q, 0.0)))
            .collect::<Result<Vec<_>>>()?,
        MetricPhase::Fixed { theta1, theta2 } => {
            let r1 = s1.rotated(theta1);
            let r2 = s2.rotated(theta2);
            alphas
                .par_iter()
                .map(|&a| q_total(&r1, &r2, p1, p2, a, sigma2).map(|q| (a, q, 0.0)))
                .collect::<Result<Vec<_>>>()?
        }
        MetricPhase::Random(avg) => {
            if avg.draws == 0 {
                return Err(invalid("phase draws must be at least 1"));
            }
            // Same draws at every α.
            alphas
                .iter()
                .map(|&a| {
                    let m = moments(&qp_draw_values(s1, s2, p1, p2, &[a, 2.0 - a], sigma2, &avg));
                    (a, m.mean(), m.stderr())
                })
                .collect()
        }
    };
    Ok(out)
}

/// `α*`: grid minimizer of `Σ_Ω Q(ᾱ)` (or `Σ_Ω Q_p(ᾱ)`). Ties go to the
/// smallest α: at high SNR the objective saturates to exactly zero over a
/// whole interval and the reported α* is its lower edge.
pub fn alpha_star(
    s1: &Constellation,
    s2: &Constellation,
    p1: f64,
    p2: f64,
    sigma2: f64,
    grid: &GridSpec,
    phase: &MetricPhase,
) -> Result<AlphaStar> {
    let obj = alpha_objectives(s1, s2, p1, p2, sigma2, grid, phase)?;
    let values: Vec<f64> = obj.iter().map(|o| o.1).collect();
    let (alpha, objective, stderr) = obj[argmin_first(&values)];
    Ok(AlphaStar {
        alpha,
        objective,
        stderr,
    })
}

/// `α_opt`: grid maximizer of the Monte-Carlo CPA sum capacity. Every grid
/// point reuses the same noise streams. Ties go to the largest α.
pub fn alpha_opt(
    s1: &Constellation,
    s2: &Constellation,
    p1: f64,
    p2: f64,
    sigma2: f64,
    grid: &GridSpec,
    mc: &McConfig,
    phase: PhaseModel,
) -> Result<AlphaOpt> {
    check_common(p1, p2, sigma2)?;
    let alphas = grid.check_alpha()?;
    let ch = ChannelSpec::new(sigma2, phase)?;
    let mut best: Option<AlphaOpt> = None;
    for &a in &alphas {
        let est = cpa_sum_capacity(s1, s2, &CpaConfig::new(p1, p2, a)?, &ch, mc)?;
        if best.as_ref().is_none_or(|b| est.bits >= b.capacity.bits) {
            best = Some(AlphaOpt { alpha: a, capacity: est });
        }
    }
    Ok(best.expect("grid is non-empty"))
}

/// `θ*` for the rotation baseline: minimizes `Q(1)` with user 2 rotated.
/// `theta_grid_deg` is in degrees; ties go to the smallest θ.
pub fn theta_star(s1: &Constellation, s2: &Constellation, p1: f64, p2: f64, sigma2: f64, theta_grid_deg: &GridSpec) -> Result<ThetaStar> {
    check_common(p1, p2, sigma2)?;
    let thetas = theta_grid_deg.check_theta_deg()?;
    let values = thetas
        .par_iter()
        .map(|&t| q_metric_rotated(s1, s2, p1, p2, 1.0, t.to_radians(), sigma2).map(|m| m.value))
        .collect::<Result<Vec<_>>>()?;
    let i = argmin_first(&values);
    Ok(ThetaStar {
        theta: thetas[i].to_radians(),
        objective: values[i],
    })
}

/// Joint minimizer of `Σ_Ω Q(ᾱ)` with user 2 rotated by θ. The θ = 0 column
/// is always searched. Ties go to the smallest α, then the smallest θ.
pub fn alpha_theta_star(
    s1: &Constellation,
    s2: &Constellation,
    p1: f64,
    p2: f64,
    sigma2: f64,
    alpha_grid: &GridSpec,
    theta_grid_deg: &GridSpec,
) -> Result<AlphaThetaStar> {
    check_common(p1, p2, sigma2)?;
    let alphas = alpha_grid.check_alpha()?;
    let mut thetas = vec![0.0];
    thetas.extend(theta_grid_deg.check_theta_deg()?);
    let cells: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| thetas.iter().map(move |&t| (a, t)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(a, t)| q_total_rotated(s1, s2, p1, p2, a, t.to_radians(), sigma2))
        .collect::<Result<Vec<_>>>()?;
    let i = argmin_first(&values);
    Ok(AlphaThetaStar {
        alpha: cells[i].0,
        theta: cells[i].1.to_radians(),
        objective: values[i],
    })
}

/// Transmission scheme of a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// α = 1, no rotation.
    Baseline,
    /// CPA at `α*`.
    Cpa,
    /// CPA at the Monte-Carlo `α_opt`.
    CpaOpt,
    /// α = 1, user 2 rotated by `θ*`.
    Cr,
    /// CPA with joint `(α*, θ*)`.
    CpaCr,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Baseline => "baseline",
            Scheme::Cpa => "cpa",
            Scheme::CpaOpt => "cpa_opt",
            Scheme::Cr => "cr",
            Scheme::CpaCr => "cpa_cr",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "baseline" => Scheme::Baseline,
            "cpa" => Scheme::Cpa,
            "cpa_opt" => Scheme::CpaOpt,
            "cr" => Scheme::Cr,
            "cpa_cr" => Scheme::CpaCr,
            other => return Err(invalid(format!("unknown scheme '{other}'"))),
        })
    }
}

/// One output row of a table or figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub constellation: String,
    pub snr_db: f64,
    /// `P₂/P₁`.
    pub p2_ratio: f64,
    pub alpha: Option<f64>,
    pub theta_deg: Option<f64>,
    pub capacity_bits: Option<f64>,
    pub stderr_bits: Option<f64>,
    pub objective: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

/// One curve of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scheme: Scheme,
    pub s1: Constellation,
    pub s2: Constellation,
    pub snr_db: Vec<f64>,
    pub p2_ratio: f64,
    pub phase: PhaseModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchGrids {
    pub alpha: GridSpec,
    /// Degrees.
    pub theta_deg: GridSpec,
}

impl Default for SearchGrids {
    fn default() -> Self {
        Self {
            alpha: GridSpec::alpha_default(),
            theta_deg: GridSpec::theta_default_deg(),
        }
    }
}

/// `P₁ = 10^{snr/10}`, `P₂ = ratio·P₁`.
pub fn powers(snr_db: f64, p2_ratio: f64) -> (f64, f64) {
    let p1 = 10f64.powf(snr_db / 10.0);
    (p1, p2_ratio * p1)
}

/// α* metric matching a channel phase model.
pub fn metric_phase(phase: PhaseModel, mc: &McConfig) -> MetricPhase {
    match phase {
        PhaseModel::None => MetricPhase::None,
        PhaseModel::Fixed { theta1, theta2 } => MetricPhase::Fixed { theta1, theta2 },
        PhaseModel::RandomUniform => MetricPhase::Random(PhaseAverage::new(mc.phase_draws, mc.seed)),
    }
}

fn sweep_point(spec: &SweepSpec, snr_db: f64, sigma2: f64, mc: &McConfig, grids: &SearchGrids) -> Result<SweepRow> {
    let (p1, p2) = powers(snr_db, spec.p2_ratio);
    let ch = ChannelSpec::new(sigma2, spec.phase)?;
    let (s1, s2) = (&spec.s1, &spec.s2);
    let cpa = |s2r: &Constellation, alpha: f64| cpa_sum_capacity(s1, s2r, &CpaConfig::new(p1, p2, alpha)?, &ch, mc);
    let (alpha, theta_deg, objective, est) = match spec.scheme {
        Scheme::Baseline => (1.0, 0.0, None, cpa(s2, 1.0)?),
        Scheme::Cpa => {
            let a = alpha_star(s1, s2, p1, p2, sigma2, &grids.alpha, &metric_phase(spec.phase, mc))?;
            (a.alpha, 0.0, Some(a.objective), cpa(s2, a.alpha)?)
        }
        Scheme::CpaOpt => {
            let a = alpha_opt(s1, s2, p1, p2, sigma2, &grids.alpha, mc, spec.phase)?;
            (a.alpha, 0.0, None, a.capacity)
        }
        Scheme::Cr => {
            let t = theta_star(s1, s2, p1, p2, sigma2, &grids.theta_deg)?;
            (1.0, t.theta.to_degrees(), Some(t.objective), cpa(&s2.rotated(t.theta), 1.0)?)
        }
        Scheme::CpaCr => {
            let j = alpha_theta_star(s1, s2, p1, p2, sigma2, &grids.alpha, &grids.theta_deg)?;
            (j.alpha, j.theta.to_degrees(), Some(j.objective), cpa(&s2.rotated(j.theta), j.alpha)?)
        }
    };
    Ok(SweepRow {
        scheme: spec.scheme,
        constellation: s1.label().to_string(),
        snr_db,
        p2_ratio: spec.p2_ratio,
        alpha: Some(alpha),
        theta_deg: Some(theta_deg),
        capacity_bits: Some(est.bits),
        stderr_bits: Some(est.stderr),
        objective,
        samples: Some(est.samples),
        seed: Some(mc.seed),
    })
}

/// One row per (curve, SNR), in input order. Noise variance is `sigma2`
/// (1 for every reproduced table and figure).
pub fn sweep(specs: &[SweepSpec], sigma2: f64, mc: &McConfig, grids: &SearchGrids) -> Result<Vec<SweepRow>> {
    mc.validate()?;
    let mut rows = Vec::new();
    for spec in specs {
        if !(spec.p2_ratio > 0.0 && spec.p2_ratio.is_finite()) {
            return Err(invalid(format!("power ratio must be positive, got {}", spec.p2_ratio)));
        }
        for &snr in &spec.snr_db {
            rows.push(sweep_point(spec, snr, sigma2, mc, grids)?);
        }
    }
    Ok(rows)
}
