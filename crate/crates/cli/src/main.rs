//! `lfu-sim`: replay traces against cache policies, generate synthetic
//! traces, and benchmark step counts.
//!
//! Exit codes: 0 success, 1 data error (unreadable or malformed trace, I/O
//! failure), 2 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::RangedU64ValueParser;
use clap::{Args, ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use lfu_cache::{PolicyKind, TieBreak};

#[derive(Debug, Parser)]
#[command(name = "lfu-sim", version, about = "LFU/LRU cache trace replay and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a trace against one policy and print a JSON report.
    Replay(ReplayArgs),
    /// Write a synthetic trace.
    Generate(GenerateArgs),
    /// Compare per-operation step counts of lfu and lfu-heap across sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Lfu,
    LfuHeap,
    Lru,
    Oracle,
}

impl From<PolicyArg> for PolicyKind {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Lfu => PolicyKind::Lfu,
            PolicyArg::LfuHeap => PolicyKind::LfuHeap,
            PolicyArg::Lru => PolicyKind::Lru,
            PolicyArg::Oracle => PolicyKind::Oracle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakArg {
    Newest,
    Oldest,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Newest => TieBreak::Newest,
            TieBreakArg::Oldest => TieBreak::Oldest,
        }
    }
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long, value_enum)]
    pub policy: PolicyArg,
    #[arg(long, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub capacity: usize,
    /// Trace file to replay.
    #[arg(long, value_name = "FILE", conflicts_with = "stdin", required_unless_present = "stdin")]
    pub trace: Option<PathBuf>,
    /// Read the trace from standard input.
    #[arg(long)]
    pub stdin: bool,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Which equally-least-frequent key LFU policies evict.
    #[arg(long, value_enum, default_value = "newest")]
    pub tie_break: TieBreakArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceKind {
    RoundRobin,
    Zipf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: TraceKind,
    /// Number of distinct keys.
    #[arg(long, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub keys: usize,
    /// Passes over the key set (round-robin).
    #[arg(long, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub rounds: Option<usize>,
    /// Number of requests (zipf).
    #[arg(long)]
    pub ops: Option<usize>,
    /// Zipf exponent, > 0.
    #[arg(long, default_value_t = 1.0)]
    pub exponent: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the trace here instead of standard output.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated cache sizes.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "64,1024,16384,262144",
        value_parser = RangedU64ValueParser::<usize>::new().range(1..)
    )]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = lfu_cache::complexity::DEFAULT_OPS_PER_SIZE)]
    pub ops_per_size: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "newest")]
    pub tie_break: TieBreakArg,
    /// Write the rows here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

fn parse() -> Cli {
    let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    let cmd = Cli::command().color(if no_color {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    });
    let matches = cmd.get_matches();
    Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit())
}

fn main() -> ExitCode {
    let cli = parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Usage(e)) => e.exit(),
        Err(commands::Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
