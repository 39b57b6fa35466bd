//! `mpmdl`: generate disassembly-line instances, run the balancing
//! solvers, compare algorithms on HV/IGD, and replay monthly demand
//! scenarios with the two-stage adjustment policy.
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 for invalid inputs,
//! 4 for runtime failures (including scenarios with skipped months).

mod artifacts;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mpmdl::baselines::{Algorithm, Scale};

#[derive(Parser)]
#[command(name = "mpmdl", version, about = "Disassembly line balancing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic instance file.
    Gen(GenArgs),
    /// Run one algorithm and export its front and Gantt charts.
    Solve(SolveArgs),
    /// Run several algorithms over several seeds and report HV/IGD.
    Compare(CompareArgs),
    /// Replay a monthly demand scenario with the two-stage adjustment.
    Adjust(AdjustArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Size preset: small, medium or large (20/40/80 tasks per line).
    #[arg(long)]
    pub size: Scale,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path for the instance JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Cycle time in seconds.
    #[arg(long, default_value_t = 650.0)]
    pub takt: f64,
    /// Probability of a precedence edge between each ordered task pair.
    #[arg(long, default_value_t = 0.1)]
    pub density: f64,
    /// Shortest task time in seconds.
    #[arg(long, default_value_t = 100)]
    pub time_min: u32,
    /// Longest task time in seconds.
    #[arg(long, default_value_t = 600)]
    pub time_max: u32,
    /// Fraction of tasks flagged hazardous.
    #[arg(long, default_value_t = 0.1)]
    pub hazard_frac: f64,
    /// Fraction of tasks flagged high-value.
    #[arg(long, default_value_t = 0.1)]
    pub value_frac: f64,
    /// Fraction of tasks twinned with an earlier task's neighborhood,
    /// standing in for interchangeable parts such as wheels or seats.
    #[arg(long, default_value_t = 0.2)]
    pub twin_frac: f64,
}

/// Solver parameters shared by solve, compare and adjust. Defaults come
/// from the per-scale preset; every flag overrides one preset field.
#[derive(Args)]
pub struct SolverOpts {
    /// Parameter preset; inferred from the instance size when omitted.
    #[arg(long)]
    pub scale: Option<Scale>,
    /// Population size.
    #[arg(long)]
    pub pop: Option<usize>,
    /// Iteration (generation) count.
    #[arg(long)]
    pub gens: Option<usize>,
    /// Crossover probability.
    #[arg(long)]
    pub pc: Option<f64>,
    /// Mutation probability.
    #[arg(long)]
    pub pm: Option<f64>,
    /// Reference-point divisions per objective.
    #[arg(long)]
    pub divisions: Option<usize>,
    /// Particle swarm individual learning factor.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Particle swarm group learning factor.
    #[arg(long)]
    pub c2: Option<f64>,
    /// Particle swarm inertia factor.
    #[arg(long)]
    pub inertia: Option<f64>,
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Algorithm: insga3, nsga3, mopso or nswoa.
    #[arg(long, default_value = "insga3")]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for front.csv, the Gantt CSVs and manifest.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub solver: SolverOpts,
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Comma-separated algorithm list.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "insga3,nsga3,mopso,nswoa"
    )]
    pub algos: Vec<Algorithm>,
    /// Comma-separated seed list; one run per (algorithm, seed) pair.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8,9")]
    pub seeds: Vec<u64>,
    /// Directory for per-run fronts, indicators.csv and summary.csv.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub solver: SolverOpts,
}

#[derive(Args)]
pub struct AdjustArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Scenario JSON: {"da_sl": .., "months": [{"month", "da_fv", "da_pev"}, ..]}.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Directory for timeline.csv, monthly fronts and manifest.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Working seconds available per month.
    #[arg(long, default_value_t = 293_150)]
    pub available_s: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverOpts,
}

#[derive(Debug)]
pub enum CliError {
    /// Inputs failed validation (bad instance, scenario or parameters).
    Validation(String),
    /// The run itself failed (I/O, skipped scenario months).
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Gen(args) => commands::gen(&args),
        Cmd::Solve(args) => commands::solve(&args),
        Cmd::Compare(args) => commands::compare(&args),
        Cmd::Adjust(args) => commands::adjust(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
