use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quatcomp::solver::Variant;

#[derive(Debug, Parser)]
#[command(name = "quatcomp", version, about = "Color video completion with quaternion tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mask a frame sequence, recover it and score the result.
    Recover(RecoverArgs),
    /// Generate a synthetic frame sequence.
    Synth(SynthArgs),
    /// Histogram of QTDCT coefficient moduli as CSV.
    Sparsity(SparsityArgs),
    /// PSNR and ASSIM between two frame sequences as JSON.
    Metrics(MetricsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Rnns1,
    Rnns2,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Rnns1 => Variant::Rnns1,
            VariantArg::Rnns2 => Variant::Rnns2,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RecoverArgs {
    /// Directory of complete PNG frames.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for recovered frames, trace and metrics.
    #[arg(long)]
    pub output: PathBuf,
    /// Fraction of entries observed.
    #[arg(long, default_value_t = 0.3, value_parser = unit_interval, conflicts_with = "mask_file")]
    pub sr: f64,
    /// Mask file to use instead of sampling one.
    #[arg(long)]
    pub mask_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = VariantArg::Rnns2)]
    pub variant: VariantArg,
    /// Sparsity weight.
    #[arg(long, default_value_t = 0.05, value_parser = positive)]
    pub lambda: f64,
    /// Initial penalty.
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub beta1: f64,
    /// Penalty growth factor [default: 1.1 for rnns1, 1.01 for rnns2].
    #[arg(long, value_parser = at_least_one)]
    pub rho: Option<f64>,
    /// Penalty cap.
    #[arg(long, default_value_t = 1e7, value_parser = positive)]
    pub beta_max: f64,
    /// Truncation rank [default: ceil(0.05·min(height, width))].
    #[arg(long)]
    pub rank_trunc: Option<usize>,
    /// Offset inside the logarithmic penalty.
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub log_eps: f64,
    /// Inner tolerance, relative to the norm of the observation.
    #[arg(long, default_value_t = 1e-4, value_parser = positive)]
    pub tol_inner: f64,
    /// Outer tolerance, relative to the norm of the observation.
    #[arg(long, default_value_t = 1e-4, value_parser = positive)]
    pub tol_outer: f64,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_inner: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_outer: u64,
    /// Seed for the mask and the multiplier initialization.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 3 when an iteration cap is reached.
    #[arg(long)]
    pub strict: bool,
    /// Record wall time in the metrics file.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SynthKind {
    /// Exact low tubal rank; frames show `(x + 1)/2` of each component.
    Lowrank,
    /// Smooth color fields with a moving blob.
    Smooth,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub height: u64,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub width: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub frames: u64,
    /// Tubal rank of the lowrank kind.
    #[arg(long, default_value_t = 3)]
    pub rank: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SparsityArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Equal-width bins above the near-zero bin.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub bins: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// JSON destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}

fn at_least_one(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v >= 1.0 {
        Ok(v)
    } else {
        Err("must be at least 1".into())
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err("must lie in (0, 1]".into())
    }
}
