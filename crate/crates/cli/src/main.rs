//! `scc`: verify, rate and trace secretive coded caching instances.
//!
//! Exit status is 0 when every check passes, 1 when a verification check fails
//! and 2 for usage or configuration errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

mod config;
mod rates;
mod trace;
mod verify;

use config::Config;

#[derive(Parser)]
#[command(name = "scc", version, about = "Secretive coded caching experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode every user and run the secrecy checks over a demand sweep.
    Verify(Args),
    /// Average (or per-demand) rates per scheme.
    Rates(Args),
    /// Transmissions and leak reports for one demand vector.
    Trace(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Outcome {
    Pass,
    CheckFailed,
}

fn emit(out: &Option<PathBuf>, body: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body)?;
            Ok(stdout.flush()?)
        }
    }
}

fn csv_bytes<T: serde::Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(w.into_inner()?)
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut body = serde_json::to_vec_pretty(value)?;
    body.push(b'\n');
    Ok(body)
}

fn execute(command: &Command) -> Result<Outcome> {
    let (Command::Verify(args) | Command::Rates(args) | Command::Trace(args)) = command;
    let mut cfg = Config::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()?;
    pool.install(|| match command {
        Command::Verify(_) => {
            let report = verify::run(&cfg)?;
            let body = match args.format.unwrap_or(Format::Json) {
                Format::Json => json_bytes(&report)?,
                Format::Csv => csv_bytes(report.failures.iter().map(verify::FailureRow::from))?,
            };
            emit(&args.out, &body)?;
            Ok(if report.pass { Outcome::Pass } else { Outcome::CheckFailed })
        }
        Command::Rates(_) => {
            let rows = rates::run(&cfg)?;
            let body = match args.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_bytes(&rows)?,
                Format::Json => json_bytes(&rows)?,
            };
            emit(&args.out, &body)?;
            Ok(Outcome::Pass)
        }
        Command::Trace(_) => {
            let traces = trace::run(&cfg)?;
            let body = match args.format {
                Some(Format::Json) => json_bytes(&traces)?,
                Some(Format::Csv) => anyhow::bail!("trace supports text and json output"),
                None => trace::render(&traces, &cfg).into_bytes(),
            };
            emit(&args.out, &body)?;
            Ok(Outcome::Pass)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
