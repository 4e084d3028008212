//! Pipeline orchestration: boundary generation → continuation → artifacts.

use std::path::PathBuf;

use broadwell_core::diagnostics::full_report;
use broadwell_core::fixed_point::continuation;
use broadwell_core::{Grid, SolverError};

use crate::artifacts::{
    fields_to_csv, format_k, moduli_to_csv, report_to_json, write_atomic, StageReport,
};
use crate::boundary_gen::make_boundary;
use crate::config::{Emit, RunConfig};

#[derive(Debug)]
pub enum RunError {
    /// Invalid configuration or boundary data (exit 2 semantics).
    Config(String),
    /// A solver invariant failed (a bug, not an iteration cap).
    Solver(SolverError),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(msg) => write!(f, "configuration error: {msg}"),
            RunError::Solver(e) => write!(f, "solver error: {e}"),
        }
    }
}

/// Paths of the artifacts one run produced, stage by stage.
#[derive(Debug, Default)]
pub struct RunArtifacts {
    pub stage_dirs: Vec<PathBuf>,
    pub all_converged: bool,
}

/// Executes the whole pipeline. Artifacts are written for every stage,
/// converged or not; `all_converged` feeds the exit status.
pub fn run(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    config.validate().map_err(RunError::Config)?;
    let grid = Grid::new(config.grid);
    let fb = make_boundary(&config.boundary, grid, config.seed).map_err(RunError::Config)?;
    let params = config.solver_params();

    let stages = continuation(&fb, &params).map_err(RunError::Solver)?;

    let mut artifacts = RunArtifacts {
        all_converged: stages.iter().all(|s| s.report.converged),
        ..Default::default()
    };
    for stage in &stages {
        let dir = config.out_dir.join(format!("k={}", format_k(stage.k)));
        std::fs::create_dir_all(&dir)
            .map_err(|e| RunError::Config(format!("creating {}: {e}", dir.display())))?;
        let diagnostics = full_report(&stage.quartet, &fb, stage.k);
        if config.emit.contains(&Emit::Fields) {
            write_atomic(&dir.join("fields.csv"), &fields_to_csv(&stage.quartet))
                .map_err(RunError::Config)?;
        }
        if config.emit.contains(&Emit::Report) {
            let report = StageReport {
                k: stage.k,
                cauchy_increment: stage.cauchy_increment,
                solve: stage.report.clone(),
                diagnostics: diagnostics.clone(),
            };
            write_atomic(&dir.join("report.json"), &report_to_json(&report))
                .map_err(RunError::Config)?;
        }
        if config.emit.contains(&Emit::Moduli) {
            write_atomic(
                &dir.join("moduli.csv"),
                &moduli_to_csv(&diagnostics.translation_moduli),
            )
            .map_err(RunError::Config)?;
        }
        artifacts.stage_dirs.push(dir);
    }
    Ok(artifacts)
}
