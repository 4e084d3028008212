//! End-to-end tests of the `broadwell` binary: exit codes, artifact
//! shapes, round-trip parseability, and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use broadwell_cli::artifacts::{
    fields_from_csv, moduli_from_csv, quartet_from_rows, report_from_json,
};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_broadwell")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("broadwell-e2e-{name}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_with(config: &str, dir: &Path, extra: &[&str]) -> Output {
    let config_path = dir.join("config.json");
    std::fs::write(&config_path, config).unwrap();
    Command::new(binary())
        .arg("--config")
        .arg(&config_path)
        .args(extra)
        .output()
        .unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn equilibrium_run_reports_tiny_deviations() {
    let dir = scratch("equilibrium");
    let out = dir.join("out");
    let config = format!(
        r#"{{"grid": 8, "k_schedule": [8.0],
            "boundary": {{"kind": "constant", "values": [0.5, 0.5, 0.5, 0.5]}},
            "out_dir": {:?}}}"#,
        out.to_str().unwrap()
    );
    let result = run_with(&config, &dir, &[]);
    assert!(result.status.success(), "{result:?}");
    let report = report_from_json(&read(&out.join("k=8/report.json"))).unwrap();
    assert!(report.solve.converged);
    assert!(report.diagnostics.flux_deviation <= 1e-10);
    assert!(report.diagnostics.line_conservation_max_dev <= 1e-10);
    assert!(report.diagnostics.entropy_production <= 1e-12);
}

#[test]
fn zero_boundary_run_writes_zero_fields() {
    let dir = scratch("zero");
    let out = dir.join("out");
    let config = format!(
        r#"{{"grid": 8, "k_schedule": [4.0],
            "boundary": {{"kind": "constant", "values": [0, 0, 0, 0]}},
            "out_dir": {:?}}}"#,
        out.to_str().unwrap()
    );
    let result = run_with(&config, &dir, &[]);
    assert!(result.status.success());
    let rows = fields_from_csv(&read(&out.join("k=4/fields.csv"))).unwrap();
    assert!(rows.iter().all(|r| r.f == [0.0; 4]));
    let report = report_from_json(&read(&out.join("k=4/report.json"))).unwrap();
    assert_eq!(report.diagnostics.component_masses, [0.0; 4]);
    assert_eq!(report.diagnostics.entropy_production, 0.0);
}

#[test]
fn identical_seeds_give_byte_identical_artifacts() {
    let dir = scratch("determinism");
    let config_for = |out: &Path| {
        format!(
            r#"{{"grid": 8, "k_schedule": [4.0, 8.0], "seed": 1234,
                "tolerances": {{"inner": 1e-11, "outer": 1e-10, "bracket": 1e-11}},
                "boundary": {{"kind": "random", "mass": 0.8}},
                "out_dir": {:?}}}"#,
            out.to_str().unwrap()
        )
    };
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    assert!(run_with(&config_for(&out_a), &dir, &[]).status.success());
    assert!(run_with(&config_for(&out_b), &dir, &[]).status.success());
    for stage in ["k=4", "k=8"] {
        for file in ["fields.csv", "report.json", "moduli.csv"] {
            let a = read(&out_a.join(stage).join(file));
            let b = read(&out_b.join(stage).join(file));
            assert_eq!(a, b, "{stage}/{file} differs between identical runs");
        }
    }
}

#[test]
fn artifacts_round_trip_through_their_own_readers() {
    let dir = scratch("roundtrip");
    let out = dir.join("out");
    let config = format!(
        r#"{{"grid": 8, "k_schedule": [6.0], "seed": 9,
            "tolerances": {{"inner": 1e-11, "outer": 1e-10, "bracket": 1e-11}},
            "boundary": {{"kind": "random", "mass": 1.0}},
            "out_dir": {:?}}}"#,
        out.to_str().unwrap()
    );
    assert!(run_with(&config, &dir, &[]).status.success());
    let stage = out.join("k=6");
    let rows = fields_from_csv(&read(&stage.join("fields.csv"))).unwrap();
    assert_eq!(rows.len(), 64);
    let quartet = quartet_from_rows(&rows).unwrap();
    assert!(quartet.is_nonnegative());
    let moduli = moduli_from_csv(&read(&stage.join("moduli.csv"))).unwrap();
    assert!(!moduli.is_empty());
    let report = report_from_json(&read(&stage.join("report.json"))).unwrap();
    assert_eq!(report.k, 6.0);
    // Masses in the report match the re-parsed fields.
    for (ci, &mass) in report.diagnostics.component_masses.iter().enumerate() {
        let comp = quartet.component(broadwell_core::Component::from_index(ci));
        assert!((comp.mass() - mass).abs() < 1e-14);
    }
}

#[test]
fn malformed_config_exits_2_with_location() {
    let dir = scratch("badjson");
    let result = run_with("{\"grid\": 8,\n  \"k_schedule\": [4.0,]}", &dir, &[]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("line"), "{stderr}");
    assert!(stderr.contains("column"), "{stderr}");
}

#[test]
fn missing_config_file_exits_2() {
    let result = Command::new(binary())
        .args(["--config", "/nonexistent/nowhere.json"])
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn iteration_cap_exits_3_but_writes_artifacts() {
    let dir = scratch("cap");
    let out = dir.join("out");
    let config = format!(
        r#"{{"grid": 8, "k_schedule": [8.0],
            "limits": {{"max_inner": 2000, "max_outer": 1, "max_bracket": 3}},
            "boundary": {{"kind": "constant", "values": [0.4, 0.1, 0.3, 0.2]}},
            "out_dir": {:?}}}"#,
        out.to_str().unwrap()
    );
    let result = run_with(&config, &dir, &[]);
    assert_eq!(result.status.code(), Some(3), "{result:?}");
    let report = report_from_json(&read(&out.join("k=8/report.json"))).unwrap();
    assert!(!report.solve.converged);
    assert!(out.join("k=8/fields.csv").exists());
}

#[test]
fn command_line_overrides_take_effect() {
    let dir = scratch("overrides");
    let out = dir.join("cli-out");
    let config = r#"{"grid": 4, "k_schedule": [2.0],
        "boundary": {"kind": "constant", "values": [0.3, 0.3, 0.3, 0.3]},
        "out_dir": "ignored"}"#;
    let result = run_with(
        config,
        &dir,
        &[
            "--out",
            out.to_str().unwrap(),
            "--grid",
            "8",
            "--k",
            "4,16",
            "--emit",
            "report",
        ],
    );
    assert!(result.status.success(), "{result:?}");
    for stage in ["k=4", "k=16"] {
        assert!(out.join(stage).join("report.json").exists());
        assert!(!out.join(stage).join("fields.csv").exists());
    }
    let report = report_from_json(&read(&out.join("k=16/report.json"))).unwrap();
    // grid override: 8×8 means the renormalized residual array exists and
    // the moduli list covers shifts h, 2h, 4h.
    assert_eq!(report.diagnostics.translation_moduli.len(), 4 * 2 * 3);
}
