use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "simon-anneal", version, about = "Penalized XOR-chain QUBOs for Simon's problem")]
pub struct Cli {
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Master seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Suppress informational messages on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a QUBO and write it as JSON.
    Build(PenaltyArgs),
    /// Enumerate the full energy spectrum of a small QUBO.
    Spectrum(SpectrumArgs),
    /// Find the exact ground states and the period they encode.
    Solve(SolveArgs),
    /// Draw samples from a QUBO.
    Sample(SampleArgs),
    /// Run a penalty-scheme comparison or a success-rate sweep.
    Experiment(ExperimentArgs),
    /// Time solvers across problem sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PenaltyArgs {
    /// Number of input bits.
    #[arg(long)]
    pub n: usize,

    /// Penalty scheme: balanced, uniform, random or zero.
    #[arg(long, default_value = "balanced")]
    pub scheme: String,

    #[arg(long, default_value_t = 2.0)]
    pub magnitude: f64,

    /// Explicit comma-separated penalties; overrides --scheme.
    #[arg(long, allow_hyphen_values = true)]
    pub penalties: Option<String>,
}

/// A model either loaded from a QUBO file or built in place.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// QUBO JSON written by `build`.
    #[arg(long, conflicts_with_all = ["n", "penalties"])]
    pub qubo: Option<PathBuf>,

    #[arg(long, required_unless_present = "qubo")]
    pub n: Option<usize>,

    #[arg(long, default_value = "balanced")]
    pub scheme: String,

    #[arg(long, default_value_t = 2.0)]
    pub magnitude: f64,

    #[arg(long, allow_hyphen_values = true)]
    pub penalties: Option<String>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Largest variable count to enumerate.
    #[arg(long, default_value_t = 24)]
    pub cap: usize,

    /// List every state of every level in the JSON report.
    #[arg(long)]
    pub states: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long, default_value = "chain_dp")]
    pub solver: String,

    #[arg(long, default_value_t = 24)]
    pub cap: usize,

    /// Most ground states to list before reporting only their count.
    #[arg(long, default_value_t = 1 << 16)]
    pub max_ground_states: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    #[arg(long, default_value_t = 200)]
    pub sweeps: usize,

    #[arg(long, default_value_t = 0.1)]
    pub beta_start: f64,

    #[arg(long, default_value_t = 5.0)]
    pub beta_end: f64,

    /// Beta interpolation: geometric or linear.
    #[arg(long, default_value = "geometric")]
    pub schedule: String,
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value = "metropolis")]
    pub sampler: String,

    /// Uniform extra field on every variable; positive favors zeros.
    #[arg(long, allow_hyphen_values = true)]
    pub bias: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long, default_value_t = 1000)]
    pub shots: u64,

    #[command(flatten)]
    pub schedule: ScheduleArgs,

    #[command(flatten)]
    pub sampler: SamplerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    /// One row per (n, scheme).
    Penalty,
    /// Balanced-penalty success rate against n, with exponential and Gaussian fits.
    Sweep,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum, default_value = "penalty")]
    pub kind: ExperimentKind,

    /// Sizes as a comma list and/or ranges such as `5..50:5`.
    #[arg(long)]
    pub n_list: String,

    #[arg(long, default_value = "balanced,random,uniform")]
    pub schemes: String,

    #[arg(long, default_value_t = 4000)]
    pub shots: u64,

    #[arg(long, default_value_t = 2.0)]
    pub magnitude: f64,

    /// Sampling runs allowed per row until both ground states appear.
    #[arg(long, default_value_t = 1)]
    pub retries: u32,

    /// Record wall time per row; output is then no longer byte-reproducible.
    #[arg(long)]
    pub timing: bool,

    /// Where a sweep writes its fit summary JSON.
    #[arg(long)]
    pub fit_out: Option<PathBuf>,

    #[command(flatten)]
    pub schedule: ScheduleArgs,

    #[command(flatten)]
    pub sampler: SamplerArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub n_list: String,

    /// Exact solvers, or samplers timed until both ground states appear.
    #[arg(long, default_value = "chain_dp")]
    pub solvers: String,

    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,

    #[arg(long, default_value_t = 24)]
    pub cap: usize,

    #[arg(long, default_value_t = 64)]
    pub batch_shots: u64,

    #[arg(long, default_value_t = 100_000)]
    pub max_shots: u64,

    #[command(flatten)]
    pub schedule: ScheduleArgs,
}
