use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cpa-gmac", version, about = "Sum capacity and power-split search for the two-user Gaussian MAC")]
pub struct Cli {
    /// Worker threads (default: all cores, or RAYON_NUM_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo sum capacity of one scheme per SNR point.
    Capacity(CapacityArgs),
    /// Metric-optimal split factor α* per SNR point.
    AlphaStar(SearchArgs),
    /// Capacity-optimal split factor α_opt per SNR point (Monte-Carlo).
    AlphaOpt(SearchArgs),
    /// Rotation θ* for the rotation baseline per SNR point.
    ThetaStar(SearchArgs),
    /// Regenerate the data behind a published table or figure.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseArg {
    None,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SchemeArg {
    Baseline,
    Cpa,
    CpaOpt,
    Cr,
    CpaCr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Built-in constellation for both users.
    #[arg(long, default_value = "qpsk", conflicts_with = "constellation_file")]
    pub constellation: String,

    /// Constellation text file (`<re> <im>` per line) for both users.
    #[arg(long, value_name = "PATH")]
    pub constellation_file: Option<PathBuf>,

    /// Require the file to already have unit average power.
    #[arg(long, requires = "constellation_file")]
    pub no_normalize: bool,

    /// Comma-separated list or START:STEP:STOP, in dB.
    #[arg(long, value_name = "LIST|START:STEP:STOP")]
    pub snr_db: String,

    /// P₂/P₁.
    #[arg(long, default_value_t = 1.0)]
    pub p2_ratio: f64,

    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,

    #[arg(long, value_enum, default_value_t = PhaseArg::None)]
    pub phase: PhaseArg,

    /// Fixed phase offset of user 1, degrees.
    #[arg(long, value_name = "DEG")]
    pub theta1: Option<f64>,

    /// Fixed phase offset of user 2, degrees.
    #[arg(long, value_name = "DEG")]
    pub theta2: Option<f64>,

    #[command(flatten)]
    pub budget: BudgetArgs,

    /// CSV destination; a manifest is written alongside. Default: stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Noise samples per symbol pair.
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,

    /// Phase draws for random-phase estimates.
    #[arg(long, default_value_t = 1_000)]
    pub phase_draws: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value = "0.01:0.01:1.00", value_name = "START:STEP:STOP")]
    pub alpha_grid: String,

    /// Degrees.
    #[arg(long, default_value = "1:1:90", value_name = "START:STEP:STOP")]
    pub theta_grid: String,
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,

    #[command(flatten)]
    pub grids: GridArgs,

    #[arg(long, value_enum, default_value_t = SchemeArg::Baseline)]
    pub scheme: SchemeArg,

    /// Split factor for `cpa`/`cpa_cr`; searched when absent.
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Rotation of user 2 for `cr`/`cpa_cr`, degrees; searched when absent.
    #[arg(long, value_name = "DEG")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,

    #[command(flatten)]
    pub grids: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub target: Target,

    #[command(flatten)]
    pub budget: BudgetArgs,

    /// Override the target's SNR grid.
    #[arg(long, value_name = "LIST|START:STEP:STOP")]
    pub snr_db: Option<String>,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}
