//! `graphflow`: graph complexes and knot integrals from the command line.
//!
//! Results go to stdout as one JSON object; errors go to stderr as JSON.

mod cache;
mod commands;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cache::{digest, Cache};
use commands::{GraphsCommand, Job, KnotCommand};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "graphflow",
    version,
    about = "Graph complexes and configuration-space integrals for knots"
)]
struct Cli {
    /// Recompute even when a cached result exists (the result is still stored).
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(
        long,
        global = true,
        env = "GRAPHFLOW_CACHE_DIR",
        default_value = ".graphflow-cache"
    )]
    cache_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(subcommand)]
    Graphs(GraphsCommand),
    #[command(subcommand)]
    Knot(KnotCommand),
}

fn workers() -> Result<usize, CliError> {
    if let Ok(raw) = std::env::var("GRAPHFLOW_WORKERS") {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Parse(format!(
                "GRAPHFLOW_WORKERS must be a positive integer, got '{raw}'"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    Ok(rayon::current_num_threads())
}

fn run(cli: Cli) -> Result<String, CliError> {
    let workers = workers()?;
    let Job { op, params, run } = match cli.command {
        Command::Graphs(cmd) => commands::graphs(cmd)?,
        Command::Knot(cmd) => commands::knot(cmd)?,
    };
    let config = json!({"op": op, "params": params, "workers": workers});
    let key = digest(format!("{}\n{config}", graphflow::VERSION).as_bytes());
    let cache = Cache::new(&cli.cache_dir);
    if !cli.no_cache {
        if let Some(hit) = cache.get(&key) {
            return Ok(hit);
        }
    }
    let mut out = run()?;
    out.insert("op".into(), json!(op));
    out.insert("config".into(), config);
    out.insert("version".into(), json!(graphflow::VERSION));
    let text = format!("{}\n", Value::Object(out));
    cache.put(&key, &text)?;
    Ok(text)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(&CliError::Parse(
                e.render().to_string().trim_end().to_string(),
            ))
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
