use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::Path;

use clap::error::ErrorKind;
use clap::CommandFactory;
use serde::Serialize;

use lfu_cache::complexity::{run_bench, BenchConfig};
use lfu_cache::trace::{format_trace, gen_round_robin, gen_zipf, parse_trace, TraceError};
use lfu_cache::replay;

use crate::{BenchArgs, Cli, Command, GenerateArgs, ReplayArgs, TraceKind};

pub enum Failure {
    Usage(clap::Error),
    Data(String),
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, msg))
}

fn emit(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    let result = match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes()).and_then(|()| out.flush())
        }
    };
    result.map_err(|e| {
        let target = path.map_or("standard output".into(), |p| p.display().to_string());
        Failure::Data(format!("writing {target}: {e}"))
    })
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Replay(args) => cmd_replay(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_replay(args: ReplayArgs) -> Result<(), Failure> {
    let parsed = match &args.trace {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| Failure::Data(format!("opening {}: {e}", path.display())))?;
            parse_trace(BufReader::new(file))
        }
        None => parse_trace(io::stdin().lock()),
    };
    let events = parsed.map_err(|e| match e {
        TraceError::Parse { .. } => Failure::Data(format!("malformed trace: {e}")),
        TraceError::Io(_) => Failure::Data(e.to_string()),
    })?;
    let report = replay(args.policy.into(), args.capacity, args.tie_break.into(), &events)
        .map_err(|e| usage(ErrorKind::ValueValidation, e))?;
    emit(args.json.as_deref(), &to_json(&report))
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let events = match args.kind {
        TraceKind::RoundRobin => {
            let rounds = args.rounds.ok_or_else(|| {
                usage(
                    ErrorKind::MissingRequiredArgument,
                    "--kind round-robin requires --rounds",
                )
            })?;
            gen_round_robin(args.keys, rounds)
        }
        TraceKind::Zipf => {
            let ops = args.ops.ok_or_else(|| {
                usage(ErrorKind::MissingRequiredArgument, "--kind zipf requires --ops")
            })?;
            if !(args.exponent.is_finite() && args.exponent > 0.0) {
                return Err(usage(
                    ErrorKind::ValueValidation,
                    format!("--exponent must be positive, got {}", args.exponent),
                ));
            }
            gen_zipf(args.keys, ops, args.exponent, args.seed)
        }
    };
    emit(args.output.as_deref(), &format_trace(&events))
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    if args.ops_per_size == 0 {
        return Err(usage(ErrorKind::ValueValidation, "--ops-per-size must be at least 1"));
    }
    let cfg = BenchConfig {
        sizes: args.sizes,
        ops_per_size: args.ops_per_size,
        seed: args.seed,
        tie_break: args.tie_break.into(),
    };
    let rows = run_bench(&cfg).map_err(|e| usage(ErrorKind::ValueValidation, e))?;
    emit(args.json.as_deref(), &to_json(&rows))
}
