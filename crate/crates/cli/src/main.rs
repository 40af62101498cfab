//! `wsat`: generate random weighted d-SAT instances, solve them, check
//! witnesses and run experiment grids.
//!
//! Exit codes: 0 SAT (or success), 1 UNSAT (or a rejected witness),
//! 2 FAILURE, 3 usage and input errors.

mod assignment;
mod commands;
mod experiment;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub const EXIT_SAT: u8 = 0;
pub const EXIT_UNSAT: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;
pub const EXIT_ERROR: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "wsat", version, about = "Weighted d-SAT on random instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample an instance from the random model and write it as DIMACS.
    Gen(GenArgs),
    /// Run the fixed-parameter solver on an instance file.
    Solve(SolveArgs),
    /// Exhaustive search for a weight-k assignment.
    Oracle(OracleArgs),
    /// Solve many random instances per grid cell and write a CSV summary.
    Experiment(experiment::ExperimentArgs),
    /// Check a claimed assignment against an instance.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("rate").required(true).args(["p", "c"]))]
pub struct GenArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 1)]
    pub dprime: u32,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Hyperedge probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// Coefficient c in p = c ln n / n^(d - dprime).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Weight target; overrides the `c k=` comment of the file.
    #[arg(long)]
    pub k: Option<usize>,
    /// Minimum negated literals per clause; values above 1 select the seed-set loop.
    #[arg(long, default_value_t = 1, conflicts_with = "mini")]
    pub dprime: usize,
    /// Solve at target round(k ln n) instead of k.
    #[arg(long)]
    pub mini: bool,
    /// Multiplier of the ceil(log2 n) component size limit.
    #[arg(long, default_value_t = 1.0)]
    pub gate_mult: f64,
    /// Run the exhaustive oracle when the solver reports FAILURE.
    #[arg(long)]
    pub fallback_oracle: bool,
    #[arg(long, default_value_t = wsat_core::oracle::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Check clause arity and negated counts against the file's comments.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = wsat_core::oracle::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// File of DIMACS-style literals; see the README for the format.
    #[arg(long)]
    pub assignment: PathBuf,
    /// Weight to check; defaults to the instance's target.
    #[arg(long)]
    pub k: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_ERROR } else { EXIT_SAT });
        }
    };
    let result = match cli.command {
        Command::Gen(args) => commands::gen(&args),
        Command::Solve(args) => commands::solve(&args),
        Command::Oracle(args) => commands::oracle(&args),
        Command::Experiment(args) => experiment::run(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
