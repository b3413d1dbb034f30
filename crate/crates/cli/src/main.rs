//! `encfault`: analysis, bounds, simulation and oracle checks for generator
//! matrices with a faulty encoder.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 capacity exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use encfault_core::Limits;

use commands::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "encfault", version, about = "Linear block codes with a faulty encoder")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub output: OutputFormat,
    /// Seed for every random draw. Echoed in all reports.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Largest k whose 2^k codebook may be enumerated.
    #[arg(long, default_value_t = Limits::default().max_message_bits, global = true)]
    pub max_message_bits: usize,
    /// Largest number of ones in G whose erasure patterns may be enumerated.
    #[arg(long, default_value_t = Limits::default().max_erasure_ones, global = true)]
    pub max_erasure_ones: usize,
}

impl GlobalArgs {
    pub fn limits(&self) -> Limits {
        Limits {
            max_message_bits: self.max_message_bits,
            max_erasure_ones: self.max_erasure_ones,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Code parameters, perfect-decoding radius and a confusion witness.
    Analyze(MatrixArg),
    /// Pairwise beta table, beta_max, rate bound and P_e bound curve.
    Bound(BoundArgs),
    /// Monte Carlo decoding error rate over a random fault channel.
    Simulate(SimulateArgs),
    /// Cross-check closed forms against exhaustive oracles.
    Oracle(OracleArgs),
    /// Seeded random generator matrix.
    Gen(GenArgs),
    /// Best-of-N random matrices by eta_max and rate bound.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
pub struct MatrixArg {
    /// Generator matrix file (`k n` header, then k rows of n bits).
    pub matrix: PathBuf,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    pub matrix: PathBuf,
    /// Erasure probability.
    #[arg(long, value_parser = probability)]
    pub p: f64,
    /// Block lengths for the P_e bound curve, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 64, 256, 1024])]
    pub n_list: Vec<usize>,
    /// Rate used in the P_e bound curve (defaults to k/n of the matrix).
    #[arg(long)]
    pub rate: Option<f64>,
    /// Which table CSV output carries.
    #[arg(long, value_enum, default_value_t = BoundTable::Pairs)]
    pub table: BoundTable,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundTable {
    Pairs,
    Curve,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Erasure,
    Insertion,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderArg {
    Md,
    Worstcase,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TiesArg {
    /// A tie that contains the sent codeword counts as an error.
    Error,
    /// Break ties uniformly at random.
    Uniform,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyArg {
    Uniform,
    Cycle,
    Fixed,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = ChannelKind::Erasure)]
    pub channel: ChannelKind,
    /// Erasure probability (erasure channel).
    #[arg(long, value_parser = probability, required_if_eq("channel", "erasure"))]
    pub p: Option<f64>,
    /// Probability that a 0 of G is read as 1 (insertion channel).
    #[arg(long, value_parser = probability, required_if_eq("channel", "insertion"))]
    pub p0: Option<f64>,
    /// Probability that a 1 of G is read as 0 (insertion channel).
    #[arg(long, value_parser = probability, required_if_eq("channel", "insertion"))]
    pub p1: Option<f64>,
    #[arg(long, value_enum, default_value_t = DecoderArg::Md)]
    pub decoder: DecoderArg,
    /// Erasure budget of the worst-case decoder (defaults to eta_max).
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = TiesArg::Error)]
    pub ties: TiesArg,
    #[arg(long, value_enum, default_value_t = PolicyArg::Uniform)]
    pub policy: PolicyArg,
    /// Message bits for `--policy fixed`.
    #[arg(long, required_if_eq("policy", "fixed"))]
    pub message: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub matrix: PathBuf,
    #[arg(long, value_parser = probability, default_value_t = 0.1)]
    pub p: f64,
    /// Monte Carlo trials for the exact-vs-simulated check.
    #[arg(long, default_value_t = 200_000)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// Probability that an entry is 1.
    #[arg(long, value_parser = probability, default_value_t = 0.5)]
    pub density: f64,
    /// Write the matrix file here as well as reporting it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub samples: u64,
    #[arg(long, value_parser = probability, default_value_t = 0.5)]
    pub density: f64,
    /// Also rank by rate bound at this erasure probability.
    #[arg(long, value_parser = probability)]
    pub p: Option<f64>,
}

fn probability(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is not a probability in [0, 1]"))
    }
}

fn run(cli: &Cli) -> Result<Box<dyn Report>, CliError> {
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Analyze(a) => Box::new(commands::analyze(a, g)?),
        Command::Bound(a) => Box::new(commands::bound(a, g)?),
        Command::Simulate(a) => Box::new(commands::simulate(a, g)?),
        Command::Oracle(a) => Box::new(commands::oracle(a, g)?),
        Command::Gen(a) => Box::new(commands::gen(a, g)?),
        Command::Search(a) => Box::new(commands::search(a, g)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.global.output {
                OutputFormat::Json => report.json(),
                OutputFormat::Csv => report.csv(),
                OutputFormat::Text => report.text(),
            };
            print!("{text}");
            if report.passed() {
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
