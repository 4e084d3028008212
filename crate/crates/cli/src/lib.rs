//! Batch front door for the Broadwell steady-state solver: JSON
//! configuration, boundary-data generation, continuation runs and
//! bit-stable CSV/JSON artifacts.

pub mod artifacts;
pub mod boundary_gen;
pub mod config;
pub mod runner;

use std::path::PathBuf;

use clap::Parser;

use crate::config::{Emit, RunConfig};
use crate::runner::{run, RunError};

/// Steady-state Broadwell solver: runs a truncation continuation and
/// writes per-stage field, report and moduli artifacts.
#[derive(Parser, Debug)]
#[command(name = "broadwell", version, about)]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid cells per axis (overrides the config).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Comma-separated truncation schedule (overrides the config).
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<f64>>,
    /// RNG seed for random boundary specs (overrides the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated artifact list: fields,report,moduli.
    #[arg(long, value_delimiter = ',')]
    pub emit: Option<Vec<String>>,
}

fn parse_emit(names: &[String]) -> Result<Vec<Emit>, String> {
    names
        .iter()
        .map(|n| match n.as_str() {
            "fields" => Ok(Emit::Fields),
            "report" => Ok(Emit::Report),
            "moduli" => Ok(Emit::Moduli),
            other => Err(format!("unknown emit flag: {other}")),
        })
        .collect()
}

/// Loads the config file and applies the command-line overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| format!("cannot read {}: {e}", cli.config.display()))?;
    let mut config: RunConfig = serde_json::from_str(&text).map_err(|e| {
        format!(
            "parse error in {} at line {} column {}: {e}",
            cli.config.display(),
            e.line(),
            e.column()
        )
    })?;
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    if let Some(grid) = cli.grid {
        config.grid = grid;
    }
    if let Some(k) = &cli.k {
        config.k_schedule = k.clone();
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(emit) = &cli.emit {
        config.emit = parse_emit(emit)?;
    }
    Ok(config)
}

/// Full CLI entry point; returns the process exit code.
///
/// 0: all stages converged. 2: configuration/parse failure. 3: a stage hit
/// an iteration cap (artifacts still written). 1: a solver invariant broke.
pub fn cli_main() -> i32 {
    let cli = Cli::parse();
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("{msg}");
            return 2;
        }
    };
    match run(&config) {
        Ok(artifacts) if artifacts.all_converged => 0,
        Ok(_) => {
            eprintln!("iteration cap reached; artifacts written with converged = false");
            3
        }
        Err(RunError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            2
        }
        Err(RunError::Solver(e)) => {
            eprintln!("solver error: {e}");
            1
        }
    }
}
