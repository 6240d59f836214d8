//! `anomdiff`: generate anomalous-diffusion trajectories, run exact Bayesian
//! model selection over them, and reduce campaigns to plot-ready tables.
//!
//! Subcommands: `simulate` (dataset from a TOML config), `infer` (two-model
//! evidence and classification per trajectory), `benchmark` (simulate and
//! infer a full grid, then aggregate MAE / F1 / confusion), `report` (tidy
//! per-figure CSV tables from a benchmark report).
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 partial failure
//! (some records were skipped or failed; outputs hold the remainder).

mod commands;
mod config;
mod dataset;
mod io;
mod jobs;

use std::path::PathBuf;
use std::process::ExitCode;

use anomdiff::priors::AlphaPrior;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "anomdiff",
    version,
    about = "Anomalous-diffusion simulation and Bayesian model selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a trajectory dataset from a config file
    Simulate(SimulateArgs),
    /// Infer exponent and model for each trajectory of a file
    Infer(InferArgs),
    /// Simulate and infer a full benchmark grid, aggregate the metrics
    Benchmark(BenchmarkArgs),
    /// Reshape a benchmark report into per-figure tables
    Report(ReportArgs),
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Run configuration (TOML)
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Override the config's master seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct InferArgs {
    /// Trajectory file (JSON Lines)
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Optional config supplying the [prior] and [nested] tables
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Exponent prior: "correct" is uniform on (0, 2), "wrong" is linear
    #[arg(long, value_enum)]
    pub prior: Option<PriorChoice>,
    /// Override the config's master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Upper edge of the uniform noise prior (default: 10 for datasets
    /// generated at sigma_mn = 10, else 1)
    #[arg(long)]
    pub noise_max: Option<f64>,
}

#[derive(Args)]
pub struct BenchmarkArgs {
    /// Run configuration (TOML)
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Override the config's master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Override the config's exponent prior
    #[arg(long, value_enum)]
    pub prior: Option<PriorChoice>,
    /// Reuse cached per-trajectory results from an interrupted run
    #[arg(long)]
    pub resume: bool,
}

#[derive(Args)]
pub struct ReportArgs {
    /// A benchmark output directory, or a report.json directly
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Also write a gnuplot script rendering the tables
    #[arg(long)]
    pub gnuplot: bool,
}

/// The benchmark's two prior campaigns: "correct" matches the uniform law
/// ground-truth exponents are drawn from, "wrong" is the linear mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorChoice {
    Correct,
    Wrong,
}

impl PriorChoice {
    pub fn alpha_prior(self) -> AlphaPrior {
        match self {
            PriorChoice::Correct => AlphaPrior::Uniform,
            PriorChoice::Wrong => AlphaPrior::Linear,
        }
    }
}

/// What a command produced, mapped onto the process exit code.
pub enum Outcome {
    Clean,
    /// Some records were skipped or failed; outputs hold the remainder.
    Partial { failed: usize, total: usize },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too and must exit 0.
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::Infer(args) => commands::infer::run(&args),
        Command::Benchmark(args) => commands::benchmark::run(&args),
        Command::Report(args) => commands::report::run(&args),
    };
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Partial { failed, total }) => {
            eprintln!("warning: {failed} of {total} records failed; see errors.jsonl");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
