//! `fcut`: generate graphs, build sparsifiers and cut trees, answer
//! single-source queries, verify artifacts and run size benchmarks.
//!
//! Exit codes: 0 ok, 1 I/O error, 2 verification failure, 3 parse error,
//! 4 guard exceeded, 5 invalid input or parameters, 6 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "fcut", version, about = "Friendly cut sparsifiers and Gomory-Hu trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a graph from one of the built-in families.
    Gen(GenArgs),
    /// Sparsify a simple graph.
    Sparsify(SparsifyArgs),
    /// Build a Gomory-Hu tree.
    Ghtree(GhtreeArgs),
    /// Minimum cuts from one source to every other node.
    Sscut(SscutArgs),
    /// Check a sparsifier or cut tree against its graph.
    Verify(VerifyArgs),
    /// Measure sparsifier sizes and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Clique,
    CliqueOfCliques,
    AltCycle,
    Gnp,
    Path,
    Star,
    Dumbbell,
    RandomRegular,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: GenFamily,
    /// Node count (clique, alt-cycle, gnp, path, star, random-regular).
    #[arg(long)]
    pub n: Option<usize>,
    /// Base clique size for clique-of-cliques.
    #[arg(long)]
    pub base: Option<usize>,
    /// Blob size for clique-of-cliques; defaults to ceil(10 sqrt(base)).
    #[arg(long)]
    pub blob: Option<usize>,
    /// Clique size of each dumbbell half.
    #[arg(long)]
    pub k: Option<usize>,
    /// Edge probability for gnp.
    #[arg(long)]
    pub p: Option<f64>,
    /// Degree for random-regular.
    #[arg(long)]
    pub d: Option<usize>,
    /// Weight scale for alt-cycle.
    #[arg(long, default_value_t = 10)]
    pub scale: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SparsifyMode {
    Oneshot,
    Iterative,
    Terminal,
    GhBased,
}

impl SparsifyMode {
    pub fn name(self) -> &'static str {
        match self {
            SparsifyMode::Oneshot => "oneshot",
            SparsifyMode::Iterative => "iterative",
            SparsifyMode::Terminal => "terminal",
            SparsifyMode::GhBased => "gh-based",
        }
    }
}

#[derive(Args, Debug)]
pub struct SparsifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Largest cut value to preserve (ignored by gh-based).
    #[arg(long, default_value_t = 1)]
    pub w: u64,
    #[arg(long, value_enum, default_value_t = SparsifyMode::Iterative)]
    pub mode: SparsifyMode,
    /// Subset file with the terminals, required by the terminal mode.
    #[arg(long)]
    pub terminals: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a JSON size report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GhAlgo {
    Classical,
    Accelerated,
}

#[derive(Args, Debug)]
pub struct GhtreeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = GhAlgo::Classical)]
    pub algo: GhAlgo,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SscutMode {
    Unfriendly,
    Exact,
    Accelerated,
}

#[derive(Args, Debug)]
pub struct SscutArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub source: usize,
    #[arg(long, value_enum, default_value_t = SscutMode::Unfriendly)]
    pub mode: SscutMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// A sparsifier or cut-tree file.
    #[arg(long)]
    pub artifact: PathBuf,
    /// Overrides the w stored in a sparsifier file.
    #[arg(long)]
    pub w: Option<u64>,
    /// Terminal subset for terminal sparsifiers.
    #[arg(long)]
    pub terminals: Option<PathBuf>,
    /// Pairs spot-checked with max-flow when the graph is too large to enumerate.
    #[arg(long, default_value_t = 64)]
    pub spot_checks: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// clique, clique-of-cliques, gnp[:p] or random-regular[:d].
    #[arg(long)]
    pub family: String,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Comma-separated values of w.
    #[arg(long = "w-grid", value_delimiter = ',', default_value = "4,16,64")]
    pub w_grid: Vec<u64>,
    #[arg(long, value_enum, default_value_t = SparsifyMode::Iterative)]
    pub mode: SparsifyMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Rows measured in parallel.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(commands::EXIT_USAGE);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
