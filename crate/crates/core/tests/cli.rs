use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn write_config(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn chaplygin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaplygin")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

const SYMMETRIC: &str = r#"{"rho_l": 1, "u_l": 1, "rho_r": 1, "u_r": -1, "A": 1, "B": 1}"#;

#[test]
fn solve_symmetric_two_shock() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", SYMMETRIC);
    let out = chaplygin(&["solve", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["region"], "IV");
    let waves = v["waves"].as_array().unwrap();
    assert_eq!(waves.len(), 2);
    assert!(waves.iter().all(|w| w["kind"] == "shock"));
    assert_eq!(v["intermediate"]["v_star"].as_f64().unwrap(), 0.0);
}

#[test]
fn solve_identical_states_has_no_waves() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", r#"{"rho_l": 2, "u_l": 0.5, "rho_r": 2, "u_r": 0.5, "A": 1, "B": 1}"#);
    let out = chaplygin(&["solve", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["waves"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_density_exits_with_config_code() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", r#"{"rho_l": 0, "u_l": 1, "rho_r": 1, "u_r": -1, "A": 1, "B": 1}"#);
    let out = chaplygin(&["solve", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rho_l") && err.contains("positive"), "{err}");
}

#[test]
fn malformed_inputs_exit_with_config_code() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    assert_eq!(chaplygin(&["solve", "--config", s(&missing)]).status.code(), Some(2));
    let bad = write_config(&dir, "p.json", r#"{"rho_l": 1}"#);
    assert_eq!(chaplygin(&["solve", "--config", s(&bad)]).status.code(), Some(2));
    let cfg = write_config(&dir, "q.json", SYMMETRIC);
    assert_eq!(chaplygin(&["profile", "--config", s(&cfg), "--t", "0"]).status.code(), Some(2));
    assert_eq!(chaplygin(&["limit", "--config", s(&cfg), "--schedule", "1:2:linear"]).status.code(), Some(2));
    assert_eq!(chaplygin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn profile_of_constant_state_drifts_with_friction() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", r#"{"rho_l": 1.5, "u_l": 0.2, "rho_r": 1.5, "u_r": 0.2, "A": 1, "B": 1, "beta": 2}"#);
    let out = chaplygin(&["profile", "--config", s(&cfg), "--t", "0.5", "--samples", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert_eq!(r[1], 1.5);
        assert!((r[2] - 1.2).abs() < 1e-15);
    }
}

#[test]
fn profile_shows_rarefaction_plateau() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", r#"{"rho_l": 1, "u_l": -1, "rho_r": 1, "u_r": 1, "A": 0, "B": 1}"#);
    let out_path = dir.path().join("profile.csv");
    let out = chaplygin(&["profile", "--config", s(&cfg), "--t", "1", "--xmin", "-0.5", "--xmax", "0.5", "--samples", "5", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rows = csv_rows(&std::fs::read_to_string(out_path).unwrap());
    // pure Chaplygin: fans span |zeta| in [1, 2], plateau rho = 1/2 between
    for r in rows {
        assert!((r[1] - 0.5).abs() < 1e-10, "{r:?}");
        assert!(r[2].abs() < 1e-10);
    }
}

#[test]
fn limit_sweep_reports_converged_verdicts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", r#"{"rho_l": 1, "u_l": 1, "rho_r": 1, "u_r": -1, "A": 1, "B": 1, "alpha": 0.5}"#);
    let report = dir.path().join("r.json");
    let out = chaplygin(&["limit", "--config", s(&cfg), "--mode", "AB", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("A,B,rho_star,v_star,sigma1_0,sigma2_0,mass_rate,momentum_rate,a_rho_n\n"));
    assert_eq!(csv_rows(&text).len(), 8);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["kind"], "concentration");
    assert_eq!(v["sigma0_target"].as_f64().unwrap(), 0.0);
    assert_eq!(v["weight_target"].as_f64().unwrap(), 2.0);
}

#[test]
fn partial_limit_and_cavitation_sweeps() {
    let dir = TempDir::new().unwrap();
    let gc = write_config(&dir, "gc.json", r#"{"rho_l": 1, "u_l": 3, "rho_r": 4, "u_r": 0, "A": 1, "B": 1}"#);
    let report = dir.path().join("gc.json.out");
    let out = chaplygin(&["limit", "--config", s(&gc), "--mode", "A", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!((v["sigma0_target"].as_f64().unwrap() - 0.93649).abs() < 1e-5);
    assert!((v["weight_target"].as_f64().unwrap() - 5.80948).abs() < 1e-5);

    let cav = write_config(&dir, "cav.json", r#"{"rho_l": 1, "u_l": -1, "rho_r": 1, "u_r": 1, "A": 1, "B": 1}"#);
    let out = chaplygin(&["limit", "--config", s(&cav), "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["kind"], "cavitation");

    // a short schedule cannot reach the limit: verdict failure
    let out = chaplygin(&["limit", "--config", s(&cav), "--schedule", "1e-1:1e-2:geometric", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn fv_compare_and_probe() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", SYMMETRIC);
    let report = dir.path().join("m.json");
    let out = chaplygin(&["fv", "--config", s(&cfg), "--t", "0.25", "--cells", "200", "--compare-exact", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_rows(&String::from_utf8(out.stdout).unwrap()).len(), 200);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let cmp = &v["compare_exact"];
    assert!(cmp["l1_rho"].as_f64().unwrap() < 0.05 * cmp["tv_rho"].as_f64().unwrap());

    let tiny = write_config(&dir, "t.json", r#"{"rho_l": 1, "u_l": 1, "rho_r": 1, "u_r": -1, "A": 1e-6, "B": 1e-6}"#);
    let out = chaplygin(&["fv", "--config", s(&tiny), "--t", "0.5", "--cells", "1600", "--probe-delta", "--report", s(&report), "--out", s(&dir.path().join("fv.csv"))]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let probe = &v["probe_delta"];
    assert_eq!(probe["target_weight"].as_f64().unwrap(), 1.0);
    assert!(probe["max_density"].as_f64().unwrap() > 10.0);

    // waves hitting the boundary are a numerical failure
    let out = chaplygin(&["fv", "--config", s(&cfg), "--t", "2", "--cells", "100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn phaseplane_tabulates_four_curves() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.json", SYMMETRIC);
    let out = chaplygin(&["phaseplane", "--config", s(&cfg), "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["R1", "S1", "R2", "S2"] {
        assert_eq!(text.lines().filter(|l| l.starts_with(&format!("{name},"))).count(), 20);
    }
    // every curve passes through the left state (1, 1)
    assert!(text.lines().filter(|l| l.ends_with(",1.0000000000000000e0,1.0000000000000000e0")).count() >= 4);
}
