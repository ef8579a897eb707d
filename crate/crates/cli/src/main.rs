//! `posmap` command line.
//!
//! Exit codes: 0 success, 2 input error, 3 non-convergence under `--strict`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "posmap",
    version,
    about = "Positive maps and bipartite entanglement diagnostics"
)]
pub struct Cli {
    /// Seed for every randomized step (restarts use per-index substreams).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance for cone and positivity verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the full result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build or inspect states.
    #[command(subcommand)]
    State(StateCmd),
    /// Separability probes and entanglement bounds on a state file.
    Measure(MeasureArgs),
    /// Positivity hierarchy of a map, or its action on a state.
    #[command(subcommand)]
    Map(MapCmd),
    /// Track diagnostics of a state under a time-dependent map family.
    Evolve(EvolveArgs),
}

#[derive(Subcommand, Debug)]
pub enum StateCmd {
    Make(Box<MakeArgs>),
    Info { state: PathBuf },
}

#[derive(Args, Debug)]
pub struct MakeArgs {
    /// bell, werner, isotropic, max_mixed, product, random_separable,
    /// random_density or gibbs.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub k: Option<u8>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub d1: Option<usize>,
    #[arg(long)]
    pub d2: Option<usize>,
    /// Number of product components (random_separable).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Single-leg state files (product).
    #[arg(long)]
    pub left: Option<PathBuf>,
    #[arg(long)]
    pub right: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of sites in the first leg (gibbs); defaults to half the chain.
    #[arg(long)]
    pub cut: Option<usize>,
}

/// Spin-chain Hamiltonian parameters.
#[derive(Args, Debug)]
pub struct ModelArgs {
    /// ising or xxz.
    #[arg(long, default_value = "ising")]
    pub model: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long = "coupling", default_value_t = 1.0)]
    pub coupling: f64,
    /// Transverse field (ising).
    #[arg(long, default_value_t = 0.0)]
    pub field: f64,
    /// Anisotropy (xxz).
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Ppt,
    Negativity,
    Eof,
    DcoefSup,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[arg(value_enum)]
    pub which: Which,
    pub state: PathBuf,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Exit with code 3 if the optimizer did not converge.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    /// Ensemble size (defaults to rank²).
    #[arg(long = "K")]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 300)]
    pub iters: usize,
}

#[derive(Args, Debug)]
pub struct MapSource {
    /// Built-in map name.
    #[arg(long, conflicts_with = "choi", required_unless_present = "choi")]
    pub catalog: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Choi matrix JSON file.
    #[arg(long)]
    pub choi: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum MapCmd {
    Check {
        #[command(flatten)]
        source: MapSource,
        /// See-saw restarts for block positivity.
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Dykstra iteration budget.
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
    },
    /// Applies the map to the first leg of a state.
    Apply {
        #[command(flatten)]
        source: MapSource,
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    pub state: PathBuf,
    /// identity, depolarizing_flow, transpose_mix or glauber_flip.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub speed: f64,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 3.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 60)]
    pub steps: usize,
    /// Also record the entanglement-of-formation bound.
    #[arg(long)]
    pub eof: bool,
    /// Also record the correlation-coefficient bound.
    #[arg(long)]
    pub dcoef_sup: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
