//! Command line, configuration and file formats around `gkp-core`.
//!
//! ```text
//! gkp <command> [--config FILE] [--set key=value]... [--out DIR] [--seed N] [--workers N]
//! ```
//!
//! Exit codes: 0 success, 1 numerical failure, 2 invalid input. `GKP_WORKERS`
//! overrides `--workers`.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod init;
pub mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use commands::execute;
pub use config::{Command, RunConfig};
pub use error::{CliError, CliResult};
pub use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "gkp", version, about = "Spectral lab for the generalized KP equation")]
pub struct Cli {
    /// groundstate, evolve, classify, instability, sweep or validate.
    pub command: String,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `key=value` override applied after the config file; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Resolves the final configuration from parsed arguments and the
/// environment (`GKP_WORKERS` beats `--workers`).
pub fn resolve(cli: &Cli, env_workers: Option<String>) -> CliResult<RunConfig> {
    let command = Command::parse(&cli.command)?;
    let mut overrides = cli.set.clone();
    if let Some(o) = &cli.out {
        overrides.push(format!("outputs.dir={:?}", o.to_string_lossy()));
    }
    if let Some(s) = cli.seed {
        overrides.push(format!("seed={s}"));
    }
    let workers = match env_workers {
        Some(w) => Some(
            w.trim()
                .parse::<usize>()
                .map_err(|_| CliError::invalid_field("GKP_WORKERS", "expects a positive integer"))?,
        ),
        None => cli.workers,
    };
    if let Some(w) = workers {
        overrides.push(format!("workers={w}"));
    }
    RunConfig::load(command, cli.config.as_deref(), &overrides)
}

/// Parses, runs and reports. Errors go to stderr as JSON and, when the
/// output directory is known, to `error.json`; the return value is the
/// process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match resolve(&cli, std::env::var("GKP_WORKERS").ok()) {
        Ok(c) => c,
        Err(e) => return report(&e, cli.out.as_deref()),
    };
    match execute(&cfg) {
        Ok(m) => {
            println!("{} artifacts written to {}", m.artifacts.len(), cfg.outputs.display());
            0
        }
        Err(e) => report(&e, Some(&cfg.outputs)),
    }
}

fn report(e: &CliError, dir: Option<&std::path::Path>) -> i32 {
    let json = e.to_json();
    eprintln!("{json}");
    if let Some(d) = dir {
        if std::fs::create_dir_all(d).is_ok() {
            let _ = std::fs::write(d.join("error.json"), serde_json::to_vec_pretty(&json).unwrap_or_default());
        }
    }
    e.exit_code()
}
