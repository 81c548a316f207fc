use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use routesim_core::sweep::{Spacing, SweepMode};
use routesim_core::Policy;

#[derive(Debug, Parser)]
#[command(name = "routesim", version, about = "SITA vs TAGS waiting times under Bounded Pareto job sizes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one policy at a fixed threshold.
    Eval(EvalArgs),
    /// Find the threshold that minimizes the mean wait.
    Optimize(OptimizeArgs),
    /// Sweep the TAGS/SITA ratio over r and write CSV.
    Sweep(SweepArgs),
    /// Check the alpha = 1 bounds on a grid of (r, lambda).
    VerifyBounds(VerifyArgs),
    /// Run the discrete-event simulator.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PolicyArg {
    Sita,
    Tags,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Sita => Policy::Sita,
            PolicyArg::Tags => Policy::Tags,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpacingArg {
    Log,
    Linear,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Log => Spacing::Log,
            SpacingArg::Linear => Spacing::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Analytic,
    Simulate,
    Both,
}

impl From<ModeArg> for SweepMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Analytic => SweepMode::Analytic,
            ModeArg::Simulate => SweepMode::Simulate,
            ModeArg::Both => SweepMode::Both,
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, value_enum)]
    pub policy: PolicyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Threshold (SITA cutoff or TAGS kill age).
    #[arg(long)]
    pub s: f64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub point: PointArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML file with sweep settings; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<SpacingArg>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Evaluate SITA at the optimal TAGS threshold instead of its own optimum.
    #[arg(long)]
    pub sita_at_tags_threshold: bool,
    /// Jobs per simulation run (simulate/both modes).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV output path; relative paths resolve against $ROUTESIM_OUTPUT_DIR.
    #[arg(long, short)]
    pub output: Option<String>,
    /// Also write a gnuplot script that plots the CSV.
    #[arg(long)]
    pub plot_script: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Values of r to check.
    #[arg(long = "r", value_delimiter = ',', num_args = 0..)]
    pub r: Vec<f64>,
    /// Absolute arrival rates.
    #[arg(long, value_delimiter = ',', conflicts_with = "lambda_over_r")]
    pub lambda: Vec<f64>,
    /// Arrival rates given as c, meaning lambda = c / r.
    #[arg(long, value_delimiter = ',')]
    pub lambda_over_r: Vec<f64>,
    /// Report CSV path; relative paths resolve against $ROUTESIM_OUTPUT_DIR.
    #[arg(long, short)]
    pub output: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub jobs: usize,
    /// Defaults to 10% of --jobs.
    #[arg(long)]
    pub warmup: Option<usize>,
    #[arg(long, default_value_t = routesim_core::simulator::DEFAULT_BATCHES)]
    pub batches: usize,
    #[arg(long, default_value_t = 1)]
    pub replications: usize,
    /// Add the analytic value and the discrepancy in half-widths.
    #[arg(long)]
    pub compare_analytic: bool,
    /// Write a CSV header and row to this path.
    #[arg(long)]
    pub csv: Option<String>,
}
