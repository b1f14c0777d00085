//! `acyclic`: batch front end for generating triangulations, checking the
//! identities of the 3D and 4D sequences, computing invariants and running
//! Pachner-move experiments.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "acyclic", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a generated triangulation file.
    Gen(GenArgs),
    /// Check curvature, chain, rank and identity residuals of a file.
    Check(CheckArgs),
    /// Torsion and invariant of a flat 3D file.
    Invariant(InvariantArgs),
    /// Apply one Pachner move.
    Move(MoveArgs),
    /// Apply a sequence of random moves, tracking the invariant.
    Experiment(ExperimentArgs),
    /// Print the labeled Jacobian matrices.
    Jacobians(JacobianArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Generator name (sphere3, sphere4, sphere4_subdivided, lens, s1xs2_experimental).
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 5)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    /// Rotation index of the generator.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Screw angle for s1xs2_experimental.
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Screw translation for s1xs2_experimental.
    #[arg(long, default_value_t = 1.3, allow_negative_numbers = true)]
    pub a: f64,
    /// Stellar subdivisions for sphere4_subdivided.
    #[arg(long, default_value_t = 1)]
    pub subdivisions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print a JSON summary wrapping the file.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Triangulation file, or `-` for standard input.
    pub file: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct InvariantArgs {
    pub file: PathBuf,
    /// Randomizes the pivot choice of the edge subset C.
    #[arg(long)]
    pub pivot_seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct MoveArgs {
    pub file: PathBuf,
    /// Move kind, e.g. 2-3, 3-2, 1-4, 4-1, 2-4, 4-2, 3-3.
    #[arg(long)]
    pub kind: String,
    /// Labels of the cell σ to flip (comma separated, `name@copy` for lifts);
    /// a random admissible site is used when absent.
    #[arg(long)]
    pub site: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the rewritten file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    pub file: PathBuf,
    /// Comma-separated move kinds to draw from.
    #[arg(long, value_delimiter = ',', default_value = "2-3,3-2,1-4,4-1")]
    pub kinds: Vec<String>,
    /// Number of moves to apply.
    #[arg(short = 'n', default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the final file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct JacobianArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Check(a) => commands::check(&a),
        Command::Invariant(a) => commands::invariant(&a),
        Command::Move(a) => commands::apply_move(&a),
        Command::Experiment(a) => commands::experiment(&a),
        Command::Jacobians(a) => commands::jacobians(&a),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
