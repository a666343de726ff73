//! Experiment runner: computes bound reports, runs greedy maximization
//! studies and adversarial-bandit experiments, and emits CSV/JSON for
//! external plotting.

mod config;
mod error;
mod model_spec;

mod cmd_bandit;
mod cmd_bound;
mod cmd_generate;
mod cmd_maximize;
mod cmd_oracle;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser)]
#[command(name = "contagion", version, about = "Contagion bounds, maximization, and adversarial-bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config file (flat key=value lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config's `seed` key.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (0 = all cores). Outputs are thread-count invariant.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every applicable influence bound for a seed set.
    Bound(cmd_bound::BoundArgs),
    /// Greedy seed-set selection under several objectives, with runtimes.
    Maximize(cmd_maximize::MaximizeArgs),
    /// Adversarial influence-maximization game with regret accounting.
    Bandit(cmd_bandit::BanditArgs),
    /// Run the brute-force equivalence suites and report pass/fail.
    OracleCheck(cmd_oracle::OracleArgs),
    /// Generate a graph from a named family and save its edge list.
    Generate(cmd_generate::GenerateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(a) => cmd_bound::run(a),
        Command::Maximize(a) => cmd_maximize::run(a),
        Command::Bandit(a) => cmd_bandit::run(a),
        Command::OracleCheck(a) => cmd_oracle::run(a),
        Command::Generate(a) => cmd_generate::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Installs the global rayon pool; `0` keeps the default (all cores).
fn init_threads(threads: usize) -> Result<(), CliError> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::runtime(format!("thread pool: {e}")))
}

/// Deterministic per-task seed derivation (splitmix64 over master ^ index).
fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
