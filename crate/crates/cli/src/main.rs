//! `cheapsep` command-line tool.

mod commands;
mod doc;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Balanced, cheap vertex separators with few outliers.
///
/// Graph files are edge lists: a header line `n m` and then `m` lines `u v`
/// with ids in `0..n`. Weight and cost files hold one value per line, in
/// vertex order, as an integer or `p/q`. Lines starting with `#` are ignored.
///
/// The exhaustive oracles refuse instances above fixed size caps. Raise them
/// with SEP_EXACT_CAPS, e.g. SEP_EXACT_CAPS="wcol=10,nabla=8,witness=22,exact=16".
///
/// Exit codes: 0 success, 1 verification failed, 2 bad input or flags,
/// 3 instance above an exact cap, 4 internal invariant violation.
#[derive(Debug, Parser)]
#[command(name = "cheapsep", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weak coloring numbers, admissibility and shallow-minor density as CSV.
    Analyze(AnalyzeArgs),
    /// Compute a separator with outliers and print a JSON result document.
    Separate(SeparateArgs),
    /// Minimum number of outliers over all balanced separators (exhaustive).
    Oracle(OracleArgs),
    /// Write an edge list and weight/cost files for a generated instance.
    Generate(GenerateArgs),
    /// Re-check a JSON result document against the raw input files.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Edge-list graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Vertex weights w (default: all 1).
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Vertex costs ρ (default: all 1).
    #[arg(long)]
    costs: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Radii to report, comma separated.
    #[arg(short, long, value_delimiter = ',', default_values_t = [1usize, 2, 3])]
    radii: Vec<usize>,
    /// Ordering: heuristic, exact, or file:PATH (one vertex per line, earliest first).
    #[arg(long, default_value = "heuristic")]
    ordering: String,
    /// Also search for a non-expansion witness at this t.
    #[arg(long, value_name = "T")]
    expander: Option<u64>,
}

#[derive(Debug, Args)]
struct SeparateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Cheapness parameter: non-outlier cost at most ρ(G)/t.
    #[arg(short, long)]
    t: u64,
    /// Number of nested engine levels.
    #[arg(short, long, default_value_t = 1)]
    a: usize,
    /// Ordering: heuristic, exact, or file:PATH (one vertex per line, earliest first).
    #[arg(long, default_value = "heuristic")]
    ordering: String,
    /// Write the engine transition log here.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Write the document here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(short, long)]
    t: u64,
    /// Count only vertices instead of weighing components by w.
    #[arg(long)]
    unweighted: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Star with SIZE leaves.
    Star,
    /// SIZE x SIZE grid.
    Grid,
    /// K_{s,n} with each edge subdivided s-2 times; SIZE is s, --n is n.
    Biclique,
    /// Random graph on SIZE vertices with bounded degree.
    Random,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    size: usize,
    /// Second size parameter for biclique.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Maximum degree for random graphs.
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Seed for random graphs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the family's lower-bound weights and costs instead of all ones.
    #[arg(long)]
    paper_costs: bool,
    /// Output prefix; writes PREFIX.edges, PREFIX.weights and PREFIX.costs.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// JSON document written by `separate`.
    #[arg(long)]
    result: PathBuf,
    /// Override the t recorded in the document.
    #[arg(short, long)]
    t: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(args) => commands::analyze(args),
        Command::Separate(args) => commands::separate(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Generate(args) => commands::generate(args),
        Command::Verify(args) => commands::verify(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
