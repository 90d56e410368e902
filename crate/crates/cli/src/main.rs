mod cache;
mod commands;
mod config;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tofsynth::{GenMode, Rule};

/// Failure classes, mapped onto exit codes 1, 2 and 3.
#[derive(Debug)]
pub enum CliError {
    Fail(String),
    Usage(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Fail(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Fail(m) | CliError::Usage(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

impl From<tofsynth::Error> for CliError {
    fn from(e: tofsynth::Error) -> Self {
        use tofsynth::Error as E;
        match e {
            E::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            E::TooFewQubits(_)
            | E::SizeLimit { .. }
            | E::DimensionMismatch(..)
            | E::NotSquare { .. }
            | E::NotUnitary(_)
            | E::PauliParse { .. }
            | E::InvalidGate(_)
            | E::Format(_) => CliError::Usage(e.to_string()),
            _ => CliError::Fail(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "tofsynth", version, about = "Toffoli-count synthesis over Clifford+Toffoli")]
struct Cli {
    /// JSON file with default settings.
    #[arg(long, global = true, env = "TOFSYNTH_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory for cached generating sets.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// More progress output on stderr (-v, -vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate (or load) the generating set.
    GenSet(GenSetArgs),
    /// Find a decomposition and emit a circuit.
    Synth(SynthArgs),
    /// Decide whether at most (exactly, for approx) m generators suffice.
    Decide(DecideArgs),
    /// Random products of generators times a Clifford.
    Random(RandomArgs),
    /// Check a circuit against a target.
    Verify(VerifyArgs),
    /// Evaluate counting and lower bounds.
    Bound(BoundArgs),
}

#[derive(Args)]
pub struct GenSetArgs {
    #[arg(short)]
    pub n: usize,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<GenMode>,
    /// Print only the cardinality.
    #[arg(long)]
    pub count_only: bool,
    /// Also write the set to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Heuristic,
    Mitm,
    Approx,
}

#[derive(Args)]
pub struct SearchArgs {
    /// Unitary, channel or instance JSON.
    pub input: PathBuf,
    /// Instance to use when the input holds several.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    #[arg(long, value_enum, default_value_t = Engine::Heuristic)]
    pub engine: Engine,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<GenMode>,
    #[arg(long, value_parser = parse_rule)]
    pub rule: Option<Rule>,
    /// Target precision of the approximate engine.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Nesting level c of the meet-in-the-middle search.
    #[arg(long)]
    pub nesting: Option<usize>,
    /// Cap on stored coset labels (memory budget).
    #[arg(long)]
    pub max_entries: Option<usize>,
}

#[derive(Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Largest Toffoli-count tried.
    #[arg(long)]
    pub max_count: Option<usize>,
    /// Write the circuit text here.
    #[arg(long)]
    pub emit_circuit: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DecideArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(short)]
    pub m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Factor {
    Circuit,
    SignedPermutation,
}

#[derive(Args)]
pub struct RandomArgs {
    #[arg(short)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fixed number of generators; otherwise instance i uses 1 + i mod max-tof.
    #[arg(long)]
    pub tof: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub max_tof: usize,
    #[arg(long, value_enum, default_value_t = Factor::Circuit)]
    pub factor: Factor,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<GenMode>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Unitary, channel or instance JSON.
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Circuit text file.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Largest accepted distance for unitary targets.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
}

#[derive(Args)]
pub struct BoundArgs {
    #[arg(short)]
    pub n: Option<u32>,
    /// Closed-form bound on the generating-set size.
    #[arg(long)]
    pub gen_set_size: bool,
    /// Closed-form bound on the controlled-S generating-set size.
    #[arg(long)]
    pub cs_gen_set_size: bool,
    /// Exact-case lower bound on the Toffoli-count.
    #[arg(long)]
    pub lower_exact: bool,
    /// Approximate-case lower bound on the Toffoli-count.
    #[arg(long)]
    pub lower_approx: bool,
    /// Largest Pauli coefficient magnitude.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of nonzero Pauli coefficients.
    #[arg(long)]
    pub support: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// The unspecified constant of the lower bounds.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Print the Pauli expansion of a rotation family.
    #[arg(long)]
    pub rotation: Option<String>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

fn parse_mode(s: &str) -> Result<GenMode, String> {
    s.parse().map_err(|e: tofsynth::Error| e.to_string())
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse().map_err(|e: tofsynth::Error| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config::Config::load(cli.config.as_deref())?;
    if let Some(k) = cli.workers.or(cfg.workers) {
        if k == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Fail(e.to_string()))?;
    }
    let cache = cfg.cache_dir(cli.cache_dir);
    match cli.command {
        Command::GenSet(a) => commands::gen_set(&cfg, &cache, a),
        Command::Synth(a) => commands::synth(&cfg, &cache, a),
        Command::Decide(a) => commands::decide(&cfg, &cache, a),
        Command::Random(a) => commands::random(&cfg, &cache, a),
        Command::Verify(a) => commands::verify(a),
        Command::Bound(a) => commands::bound(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
