use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use l2p_core::Exponent;

pub const OUT_DIR_ENV: &str = "L2P_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "l2p",
    version,
    about = "Row-sparse l2,p minimization, feature selection and traces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize ‖Y‖₂,ₚᵖ subject to MY = B.
    Solve(SolveArgs),
    /// Rank features of a labeled CSV by l2,p-regularized regression.
    Select(SelectArgs),
    /// Merge solver traces into long-format (p, k, rho) rows.
    TracePlotData(TraceArgs),
    /// Write a synthetic labeled dataset with a planted informative support.
    Synth(SynthArgs),
    /// Repeat a run from its manifest.json.
    Rerun(RerunArgs),
}

pub fn parse_exponent(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    Exponent::new(v).map(Exponent::value).map_err(|e| e.to_string())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a non-negative number, got `{s}`")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Stop when the relative objective reduction is at most this.
    #[arg(long, default_value_t = 1e-8, value_parser = parse_positive)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// Weight smoothing; how it enters depends on --policy.
    #[arg(long, default_value_t = 1e-12, value_parser = parse_non_negative)]
    pub epsilon: f64,
    /// Weight policy: smoothed-scaled, smoothed, strict or invert-zero.
    #[arg(long, default_value = "smoothed-scaled")]
    pub policy: String,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    #[arg(long, env = OUT_DIR_ENV, default_value = "l2p-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Headerless CSV, one constraint per line (n×m).
    #[arg(long)]
    pub m: PathBuf,
    /// Headerless CSV, n×c.
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_parser = parse_exponent)]
    pub p: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Labeled CSV with a header row; every column but the label is a feature.
    #[arg(long)]
    pub data: PathBuf,
    /// Header name or zero-based index of the label column.
    #[arg(long, default_value = "label")]
    pub label_column: String,
    #[arg(long = "p", value_parser = parse_exponent, default_values_t = [0.25, 0.5, 0.75, 1.0])]
    pub p: Vec<f64>,
    #[arg(long = "k", default_values_t = [20usize, 40, 60, 80])]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub gamma: f64,
    /// Append an all-ones feature row (never ranked).
    #[arg(long, overrides_with = "no_bias")]
    pub bias: bool,
    #[arg(long, overrides_with = "bias")]
    pub no_bias: bool,
    /// Fraction of each class held out for the nearest-centroid error column.
    #[arg(long, default_value_t = 0.0, value_parser = parse_non_negative)]
    pub test_fraction: f64,
    /// Known informative feature indices, for the support-recovery column.
    #[arg(long, value_delimiter = ',')]
    pub true_support: Option<Vec<usize>>,
    /// Use n instead of n−1 for the standard deviation.
    #[arg(long)]
    pub population_std: bool,
    /// Seeds the train/test split.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

impl SelectArgs {
    pub fn include_bias(&self) -> bool {
        self.bias || !self.no_bias
    }
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Trace CSVs as `P=PATH`, or `PATH` whose file name contains `p<value>`.
    #[arg(required = true)]
    pub inputs: Vec<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 60)]
    pub samples: usize,
    #[arg(long, default_value_t = 40)]
    pub features: usize,
    #[arg(long, default_value_t = 3)]
    pub classes: usize,
    #[arg(long, default_value_t = 3)]
    pub informative: usize,
    #[arg(long, default_value_t = 2.0, value_parser = parse_positive)]
    pub separation: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    pub manifest: PathBuf,
    /// Write to this directory instead of the recorded one.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
