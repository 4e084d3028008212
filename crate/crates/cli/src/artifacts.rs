//! Bit-stable artifact writers and the matching readers.
//!
//! All floating-point values go out with 17 significant digits so that
//! re-running a configuration produces byte-identical files and downstream
//! golden-file diffs are meaningful.

use std::path::Path;

use serde::{Deserialize, Serialize};

use broadwell_core::diagnostics::{Axis, DiagnosticsReport, ModulusEntry};
use broadwell_core::{Component, FieldQuartet, Grid, SolveReport};

/// 17 significant digits, scientific; enough to round-trip any f64.
pub fn sig17(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Fixed decimal rendering for the per-stage directory name `k=<value>`.
pub fn format_k(k: f64) -> String {
    if k.fract() == 0.0 && k.abs() < 1e15 {
        format!("{}", k as i64)
    } else {
        format!("{k}")
    }
}

pub const FIELDS_HEADER: &str = "i_x,i_y,x,y,F1,F2,F3,F4";
pub const MODULI_HEADER: &str = "component,axis,h,raw,renormalized";

/// One `fields.csv` row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldRow {
    pub i_x: usize,
    pub i_y: usize,
    pub x: f64,
    pub y: f64,
    pub f: [f64; 4],
}

/// Renders the quartet as CSV, one row per cell, row-major in `(i_x, i_y)`.
pub fn fields_to_csv(q: &FieldQuartet) -> String {
    let grid = q.grid();
    let n = grid.n_cells();
    let mut out = String::with_capacity(n * n * 160);
    out.push_str(FIELDS_HEADER);
    out.push('\n');
    for ix in 0..n {
        for iy in 0..n {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                ix,
                iy,
                sig17(grid.center(ix)),
                sig17(grid.center(iy)),
                sig17(q.component(Component::F1).get(ix, iy)),
                sig17(q.component(Component::F2).get(ix, iy)),
                sig17(q.component(Component::F3).get(ix, iy)),
                sig17(q.component(Component::F4).get(ix, iy)),
            ));
        }
    }
    out
}

/// Parses `fields.csv` back; checks the header and field count.
pub fn fields_from_csv(text: &str) -> Result<Vec<FieldRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == FIELDS_HEADER => {}
        other => return Err(format!("bad fields header: {other:?}")),
    }
    let mut rows = Vec::new();
    for (no, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 8 {
            return Err(format!("fields row {}: expected 8 columns", no + 2));
        }
        let num =
            |s: &str| -> Result<f64, String> { s.parse().map_err(|e| format!("row {}: {e}", no + 2)) };
        rows.push(FieldRow {
            i_x: parts[0].parse().map_err(|e| format!("row {}: {e}", no + 2))?,
            i_y: parts[1].parse().map_err(|e| format!("row {}: {e}", no + 2))?,
            x: num(parts[2])?,
            y: num(parts[3])?,
            f: [num(parts[4])?, num(parts[5])?, num(parts[6])?, num(parts[7])?],
        });
    }
    Ok(rows)
}

/// Rebuilds the quartet from parsed rows.
pub fn quartet_from_rows(rows: &[FieldRow]) -> Result<FieldQuartet, String> {
    let n = (rows.len() as f64).sqrt().round() as usize;
    if n < 2 || n * n != rows.len() {
        return Err(format!("{} rows is not a square grid", rows.len()));
    }
    let mut q = FieldQuartet::zeros(Grid::new(n));
    for row in rows {
        for (ci, &v) in row.f.iter().enumerate() {
            q.component_mut(Component::from_index(ci))
                .set(row.i_x, row.i_y, v);
        }
    }
    Ok(q)
}

fn axis_name(a: Axis) -> &'static str {
    match a {
        Axis::X => "x",
        Axis::Y => "y",
    }
}

pub fn moduli_to_csv(entries: &[ModulusEntry]) -> String {
    let mut out = String::new();
    out.push_str(MODULI_HEADER);
    out.push('\n');
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.component,
            axis_name(e.axis),
            sig17(e.h),
            sig17(e.raw),
            sig17(e.renormalized),
        ));
    }
    out
}

pub fn moduli_from_csv(text: &str) -> Result<Vec<ModulusEntry>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == MODULI_HEADER => {}
        other => return Err(format!("bad moduli header: {other:?}")),
    }
    let mut entries = Vec::new();
    for (no, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(format!("moduli row {}: expected 5 columns", no + 2));
        }
        let axis = match parts[1] {
            "x" => Axis::X,
            "y" => Axis::Y,
            other => return Err(format!("moduli row {}: bad axis {other}", no + 2)),
        };
        let num =
            |s: &str| -> Result<f64, String> { s.parse().map_err(|e| format!("row {}: {e}", no + 2)) };
        entries.push(ModulusEntry {
            component: parts[0].parse().map_err(|e| format!("row {}: {e}", no + 2))?,
            axis,
            h: num(parts[2])?,
            raw: num(parts[3])?,
            renormalized: num(parts[4])?,
        });
    }
    Ok(entries)
}

/// The per-stage `report.json` payload.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageReport {
    pub k: f64,
    /// L¹ distance to the previous stage's solution; absent on the first.
    pub cauchy_increment: Option<f64>,
    pub solve: SolveReport,
    pub diagnostics: DiagnosticsReport,
}

pub fn report_to_json(report: &StageReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization");
    text.push('\n');
    text
}

pub fn report_from_json(text: &str) -> Result<StageReport, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn write_atomic(path: &Path, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("writing {}: {e}", path.display()))
}
