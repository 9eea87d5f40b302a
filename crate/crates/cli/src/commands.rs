//! Command execution: flags in, rows and manifest parameters out.

use std::path::PathBuf;

use cpa_gmac::capacity::cpa_sum_capacity;
use cpa_gmac::optimizer::{
    alpha_opt, alpha_star, metric_phase, powers, sweep, theta_star, GridSpec, MetricPhase, Scheme, SearchGrids, SweepRow, SweepSpec,
};
use cpa_gmac::{load_constellation, make_8qam, ChannelSpec, Constellation, CpaConfig, McConfig, PhaseModel};
use serde_json::json;

use crate::args::{BudgetArgs, CapacityArgs, ChannelArgs, Command, GridArgs, PhaseArg, ReproduceArgs, SchemeArg, SearchArgs, Target};
use crate::error::CliError;

/// Rows plus the resolved parameters that produced them.
pub struct Run {
    pub rows: Vec<SweepRow>,
    pub params: serde_json::Value,
    pub out: Option<PathBuf>,
}

pub fn execute(cmd: &Command) -> Result<Run, CliError> {
    match cmd {
        Command::Capacity(a) => capacity(a),
        Command::AlphaStar(a) => search(a, "alpha-star"),
        Command::AlphaOpt(a) => search(a, "alpha-opt"),
        Command::ThetaStar(a) => search(a, "theta-star"),
        Command::Reproduce(a) => reproduce(a),
    }
}

/// `a,b,c` or `START:STEP:STOP`.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>, CliError> {
    if s.contains(':') {
        let g: GridSpec = s.parse()?;
        return Ok(g.points());
    }
    let v = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bad SNR value '{t}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(v)
}

fn parse_grid(s: &str, what: &str) -> Result<GridSpec, CliError> {
    s.parse::<GridSpec>()
        .map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn mc_config(b: &BudgetArgs) -> Result<McConfig, CliError> {
    Ok(McConfig::new(b.samples, b.phase_draws, b.seed)?)
}

fn budget_json(b: &BudgetArgs) -> serde_json::Value {
    json!({ "samples": b.samples, "phase_draws": b.phase_draws, "seed": b.seed })
}

struct Setup {
    s: Constellation,
    snr_db: Vec<f64>,
    p2_ratio: f64,
    sigma2: f64,
    phase: PhaseModel,
    mc: McConfig,
    params: serde_json::Value,
}

fn setup(ch: &ChannelArgs) -> Result<Setup, CliError> {
    let s = match &ch.constellation_file {
        Some(path) => load_constellation(path, !ch.no_normalize)?,
        None => Constellation::by_name(&ch.constellation)?,
    };
    let snr_db = parse_snr_list(&ch.snr_db)?;
    if !(ch.p2_ratio > 0.0 && ch.p2_ratio.is_finite()) {
        return Err(CliError::Usage(format!("--p2-ratio must be positive, got {}", ch.p2_ratio)));
    }
    let phase = match (ch.phase, ch.theta1, ch.theta2) {
        (PhaseArg::Random, None, None) => PhaseModel::RandomUniform,
        (PhaseArg::Random, _, _) => return Err(CliError::Usage("--theta1/--theta2 need --phase none".into())),
        (PhaseArg::None, None, None) => PhaseModel::None,
        (PhaseArg::None, t1, t2) => PhaseModel::Fixed {
            theta1: t1.unwrap_or(0.0).to_radians(),
            theta2: t2.unwrap_or(0.0).to_radians(),
        },
    };
    ChannelSpec::new(ch.sigma2, phase)?;
    let mc = mc_config(&ch.budget)?;
    let params = json!({
        "constellation": s.label(),
        "constellation_file": ch.constellation_file.as_ref().map(|p| p.display().to_string()),
        "normalize": !ch.no_normalize,
        "snr_db": snr_db,
        "p2_ratio": ch.p2_ratio,
        "sigma2": ch.sigma2,
        "phase": phase,
        "mc": budget_json(&ch.budget),
    });
    Ok(Setup {
        s,
        snr_db,
        p2_ratio: ch.p2_ratio,
        sigma2: ch.sigma2,
        phase,
        mc,
        params,
    })
}

fn grids(g: &GridArgs) -> Result<SearchGrids, CliError> {
    Ok(SearchGrids {
        alpha: parse_grid(&g.alpha_grid, "alpha-grid")?,
        theta_deg: parse_grid(&g.theta_grid, "theta-grid")?,
    })
}

fn scheme(s: SchemeArg) -> Scheme {
    match s {
        SchemeArg::Baseline => Scheme::Baseline,
        SchemeArg::Cpa => Scheme::Cpa,
        SchemeArg::CpaOpt => Scheme::CpaOpt,
        SchemeArg::Cr => Scheme::Cr,
        SchemeArg::CpaCr => Scheme::CpaCr,
    }
}

fn capacity(a: &CapacityArgs) -> Result<Run, CliError> {
    let st = setup(&a.channel)?;
    let g = grids(&a.grids)?;
    let sch = scheme(a.scheme);
    let fixed = match (sch, a.alpha, a.theta) {
        (Scheme::Baseline | Scheme::CpaOpt, None, None) => None,
        (Scheme::Cpa, alpha, None) => alpha.map(|x| (x, 0.0)),
        (Scheme::Cr, None, theta) => theta.map(|t| (1.0, t)),
        (Scheme::CpaCr, None, None) => None,
        (Scheme::CpaCr, Some(x), Some(t)) => Some((x, t)),
        (Scheme::CpaCr, _, _) => return Err(CliError::Usage("cpa_cr takes both --alpha and --theta, or neither".into())),
        _ => return Err(CliError::Usage(format!("--alpha/--theta do not apply to scheme {sch}"))),
    };
    let rows = match fixed {
        None => sweep(
            &[SweepSpec {
                scheme: sch,
                s1: st.s.clone(),
                s2: st.s.clone(),
                snr_db: st.snr_db.clone(),
                p2_ratio: st.p2_ratio,
                phase: st.phase,
            }],
            st.sigma2,
            &st.mc,
            &g,
        )?,
        Some((alpha, theta_deg)) => {
            let ch = ChannelSpec::new(st.sigma2, st.phase)?;
            let s2 = if theta_deg == 0.0 { st.s.clone() } else { st.s.rotated(theta_deg.to_radians()) };
            st.snr_db
                .iter()
                .map(|&snr| {
                    let (p1, p2) = powers(snr, st.p2_ratio);
                    let est = cpa_sum_capacity(&st.s, &s2, &CpaConfig::new(p1, p2, alpha)?, &ch, &st.mc)?;
                    Ok(SweepRow {
                        scheme: sch,
                        constellation: st.s.label().to_string(),
                        snr_db: snr,
                        p2_ratio: st.p2_ratio,
                        alpha: Some(alpha),
                        theta_deg: Some(theta_deg),
                        capacity_bits: Some(est.bits),
                        stderr_bits: Some(est.stderr),
                        objective: None,
                        samples: Some(est.samples),
                        seed: Some(st.mc.seed),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?
        }
    };
    let mut params = st.params;
    params["command"] = json!("capacity");
    params["scheme"] = json!(sch);
    params["alpha"] = json!(a.alpha);
    params["theta_deg"] = json!(a.theta);
    params["alpha_grid"] = json!(g.alpha);
    params["theta_grid_deg"] = json!(g.theta_deg);
    Ok(Run {
        rows,
        params,
        out: a.channel.out.clone(),
    })
}

#[allow(clippy::too_many_arguments)]
fn alpha_star_row(
    s: &Constellation,
    snr: f64,
    p2_ratio: f64,
    sigma2: f64,
    grid: &GridSpec,
    mp: &MetricPhase,
    seed: Option<u64>,
) -> Result<SweepRow, CliError> {
    let (p1, p2) = powers(snr, p2_ratio);
    let a = alpha_star(s, s, p1, p2, sigma2, grid, mp)?;
    Ok(SweepRow {
        scheme: Scheme::Cpa,
        constellation: s.label().to_string(),
        snr_db: snr,
        p2_ratio,
        alpha: Some(a.alpha),
        theta_deg: None,
        capacity_bits: None,
        stderr_bits: None,
        objective: Some(a.objective),
        samples: None,
        seed,
    })
}

fn search(a: &SearchArgs, which: &str) -> Result<Run, CliError> {
    let st = setup(&a.channel)?;
    let g = grids(&a.grids)?;
    let s = &st.s;
    let mut rows = Vec::with_capacity(st.snr_db.len());
    for &snr in &st.snr_db {
        let (p1, p2) = powers(snr, st.p2_ratio);
        let row = match which {
            "alpha-star" => {
                let mp = metric_phase(st.phase, &st.mc);
                let seed = matches!(mp, MetricPhase::Random(_)).then_some(st.mc.seed);
                alpha_star_row(s, snr, st.p2_ratio, st.sigma2, &g.alpha, &mp, seed)?
            }
            "alpha-opt" => {
                let r = alpha_opt(s, s, p1, p2, st.sigma2, &g.alpha, &st.mc, st.phase)?;
                SweepRow {
                    scheme: Scheme::CpaOpt,
                    constellation: s.label().to_string(),
                    snr_db: snr,
                    p2_ratio: st.p2_ratio,
                    alpha: Some(r.alpha),
                    theta_deg: Some(0.0),
                    capacity_bits: Some(r.capacity.bits),
                    stderr_bits: Some(r.capacity.stderr),
                    objective: None,
                    samples: Some(r.capacity.samples),
                    seed: Some(st.mc.seed),
                }
            }
            _ => {
                let t = theta_star(s, s, p1, p2, st.sigma2, &g.theta_deg)?;
                SweepRow {
                    scheme: Scheme::Cr,
                    constellation: s.label().to_string(),
                    snr_db: snr,
                    p2_ratio: st.p2_ratio,
                    alpha: Some(1.0),
                    theta_deg: Some(t.theta.to_degrees()),
                    capacity_bits: None,
                    stderr_bits: None,
                    objective: Some(t.objective),
                    samples: None,
                    seed: None,
                }
            }
        };
        rows.push(row);
    }
    let mut params = st.params;
    params["command"] = json!(which);
    params["alpha_grid"] = json!(g.alpha);
    params["theta_grid_deg"] = json!(g.theta_deg);
    Ok(Run {
        rows,
        params,
        out: a.channel.out.clone(),
    })
}

fn named(name: &str) -> Constellation {
    Constellation::by_name(name).expect("built-in constellation")
}

fn grid_points(start: f64, step: f64, stop: f64) -> Vec<f64> {
    GridSpec { start, stop, step }.points()
}

/// Default SNR grid (dB) of each target.
pub fn target_snr(target: Target) -> Vec<f64> {
    match target {
        Target::Table1 => grid_points(0.0, 2.0, 30.0),
        Target::Table2 => grid_points(0.0, 4.0, 24.0),
        Target::Table3 => grid_points(0.0, 5.0, 30.0),
        _ => grid_points(0.0, 2.0, 30.0),
    }
}

fn curves(schemes: &[Scheme], consts: &[Constellation], snr: &[f64], ratios: &[f64], phase: PhaseModel) -> Vec<SweepSpec> {
    let mut out = Vec::new();
    for s in consts {
        for &r in ratios {
            for &sch in schemes {
                out.push(SweepSpec {
                    scheme: sch,
                    s1: s.clone(),
                    s2: s.clone(),
                    snr_db: snr.to_vec(),
                    p2_ratio: r,
                    phase,
                });
            }
        }
    }
    out
}

/// Full data grid of a table or figure at σ² = 1, SNR = P₁.
pub fn reproduce_rows(target: Target, snr: &[f64], mc: &McConfig) -> Result<Vec<SweepRow>, CliError> {
    let g = SearchGrids::default();
    let (qpsk, psk8) = (named("qpsk"), named("8psk"));
    let rows = match target {
        Target::Table1 => {
            let mut rows = Vec::new();
            for s in [qpsk, psk8, named("16psk"), named("16qam")] {
                for &x in snr {
                    rows.push(alpha_star_row(&s, x, 1.0, 1.0, &g.alpha, &MetricPhase::None, None)?);
                }
            }
            rows
        }
        Target::Table3 => {
            let mp = metric_phase(PhaseModel::RandomUniform, mc);
            let mut rows = Vec::new();
            for s in [qpsk, make_8qam(), psk8] {
                for &x in snr {
                    rows.push(alpha_star_row(&s, x, 1.0, 1.0, &g.alpha, &mp, Some(mc.seed))?);
                }
            }
            rows
        }
        Target::Table2 | Target::Fig3 => sweep(&curves(&[Scheme::CpaOpt, Scheme::Cpa], &[qpsk, psk8], snr, &[1.0], PhaseModel::None), 1.0, mc, &g)?,
        Target::Fig1 | Target::Fig2 => {
            let s = if target == Target::Fig1 { qpsk } else { psk8 };
            let schemes = [Scheme::Baseline, Scheme::Cpa, Scheme::Cr, Scheme::CpaCr];
            sweep(&curves(&schemes, &[s], snr, &[1.0], PhaseModel::None), 1.0, mc, &g)?
        }
        Target::Fig4 => {
            let schemes = [Scheme::Baseline, Scheme::Cpa, Scheme::Cr];
            sweep(&curves(&schemes, &[qpsk], snr, &[0.3, 0.5, 0.75, 0.9], PhaseModel::None), 1.0, mc, &g)?
        }
        Target::Fig5 | Target::Fig6 => {
            let s = if target == Target::Fig5 { qpsk } else { psk8 };
            // Under random phase the rotation baseline is α = 1.
            sweep(&curves(&[Scheme::Baseline, Scheme::Cpa], &[s], snr, &[1.0], PhaseModel::RandomUniform), 1.0, mc, &g)?
        }
        Target::Fig7 => sweep(
            &curves(&[Scheme::Baseline, Scheme::Cpa], &[qpsk], snr, &[0.5, 0.75, 0.9], PhaseModel::RandomUniform),
            1.0,
            mc,
            &g,
        )?,
    };
    Ok(rows)
}

fn reproduce(a: &ReproduceArgs) -> Result<Run, CliError> {
    let mc = mc_config(&a.budget)?;
    let snr = match &a.snr_db {
        Some(s) => parse_snr_list(s)?,
        None => target_snr(a.target),
    };
    let rows = reproduce_rows(a.target, &snr, &mc)?;
    let params = json!({
        "command": "reproduce",
        "target": format!("{:?}", a.target).to_lowercase(),
        "snr_db": snr,
        "sigma2": 1.0,
        "grids": SearchGrids::default(),
        "mc": budget_json(&a.budget),
    });
    Ok(Run {
        rows,
        params,
        out: a.out.clone(),
    })
}
