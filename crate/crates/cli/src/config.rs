//! Run configuration: JSON on disk, round-trip stable.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use broadwell_core::SolverParams;

/// What to write per continuation stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    Fields,
    Report,
    Moduli,
}

/// Convergence thresholds, grouped to keep the config flat and short.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub inner: f64,
    pub outer: f64,
    pub bracket: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let p = SolverParams::default();
        Tolerances {
            inner: p.tol_inner,
            outer: p.tol_outer,
            bracket: p.tol_bracket,
        }
    }
}

/// Iteration caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub max_inner: usize,
    pub max_outer: usize,
    pub max_bracket: usize,
}

impl Default for Limits {
    fn default() -> Self {
        let p = SolverParams::default();
        Limits {
            max_inner: p.max_inner,
            max_outer: p.max_outer,
            max_bracket: p.max_bracket,
        }
    }
}

/// The inflow profile family. One profile is sampled per boundary face.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundarySpec {
    /// Per-component constants `[c1, c2, c3, c4]`.
    Constant { values: [f64; 4] },
    /// `low` below `split`, `high` at and above it, on every face.
    Step { low: f64, high: f64, split: f64 },
    /// `scale · t^exponent` along each face coordinate.
    Power { exponent: f64, scale: f64 },
    /// Seeded uniform samples rescaled to the prescribed total mass.
    Random { mass: f64 },
    /// JSON file `{"traces": [[..],[..],[..],[..]]}` with `grid` samples each.
    File { path: PathBuf },
}

fn default_emit() -> Vec<Emit> {
    vec![Emit::Fields, Emit::Report, Emit::Moduli]
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// One batch run: grid, schedules, tolerances, boundary data and outputs.
/// JSON keys mirror the field names exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: usize,
    pub k_schedule: Vec<f64>,
    #[serde(default)]
    pub alpha_schedule: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub limits: Limits,
    pub boundary: BoundarySpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_emit")]
    pub emit: Vec<Emit>,
}

impl RunConfig {
    /// Checks everything the solver preconditions need, with config-level
    /// messages.
    pub fn validate(&self) -> Result<(), String> {
        if self.grid < 2 {
            return Err("grid must be at least 2".into());
        }
        if self.k_schedule.is_empty() {
            return Err("k_schedule must not be empty".into());
        }
        self.solver_params().validate()
    }

    /// Translates into the core solver parameter block (the per-stage `k`
    /// is owned by the continuation loop).
    pub fn solver_params(&self) -> SolverParams {
        let mut p = SolverParams::default();
        p.k = self.k_schedule[0];
        p.k_schedule = self.k_schedule.clone();
        if !self.alpha_schedule.is_empty() {
            p.alpha_schedule = self.alpha_schedule.clone();
            p.alpha = self.alpha_schedule[0];
        }
        p.tol_inner = self.tolerances.inner;
        p.tol_outer = self.tolerances.outer;
        p.tol_bracket = self.tolerances.bracket;
        p.max_inner = self.limits.max_inner;
        p.max_outer = self.limits.max_outer;
        p.max_bracket = self.limits.max_bracket;
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunConfig {
        RunConfig {
            grid: 16,
            k_schedule: vec![4.0, 16.0],
            alpha_schedule: vec![],
            tolerances: Tolerances::default(),
            limits: Limits::default(),
            boundary: BoundarySpec::Constant {
                values: [0.4, 0.1, 0.3, 0.2],
            },
            seed: 7,
            out_dir: PathBuf::from("out"),
            emit: default_emit(),
        }
    }

    #[test]
    fn json_round_trip_is_identity() {
        let c = sample();
        let text = serde_json::to_string_pretty(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        // And serialization is stable across a second pass.
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"grid": 8, "k_schedule": [4.0], "boundary": {"kind": "constant", "values": [0,0,0,0]}, "mystery": 1}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let text = r#"{"grid": 8, "k_schedule": [8.0], "boundary": {"kind": "constant", "values": [0.5, 0.5, 0.5, 0.5]}}"#;
        let c: RunConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.emit, default_emit());
        assert_eq!(c.seed, 0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_degenerate_grid_and_empty_schedule() {
        let mut c = sample();
        c.grid = 1;
        assert!(c.validate().is_err());
        let mut c = sample();
        c.k_schedule.clear();
        assert!(c.validate().is_err());
    }
}
