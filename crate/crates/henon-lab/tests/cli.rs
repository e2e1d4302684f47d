//! Black-box tests of the binary: JSON shape, determinism, file round
//! trips, and structured errors.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_henon-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_reports_side_and_provenance() {
    let out = run(&["classify", "--N", "3", "--p", "5", "--q", "5"]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["side"], "On");
    assert_eq!(v["report"]["gap"].as_f64().unwrap(), 0.0);
    let hash = v["provenance"]["config_sha256"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    assert!(v["report"]["hypotheses"].as_object().unwrap().len() >= 5);
}

#[test]
fn solve_scalar_is_deterministic() {
    let args = ["solve-scalar", "--N", "3", "--p", "2", "--alpha", "1.5", "--grid", "128"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!(v["converged"].as_bool().unwrap());
    assert!(v["level"].as_f64().unwrap() > 0.0);
}

#[test]
fn system_solution_round_trips_through_grid_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("pair");
    let out = run(&[
        "solve-system",
        "--N", "3", "--p", "3", "--q", "2", "--grid", "128",
        "--out", prefix.to_str().unwrap(),
    ]);
    let solved = stdout_json(&out);
    let u_path = format!("{}.u.grid", prefix.display());
    let v_path = format!("{}.v.grid", prefix.display());
    assert!(Path::new(&u_path).exists() && Path::new(&v_path).exists());

    let out = run(&[
        "pohozaev",
        "--N", "3", "--p", "3", "--q", "2",
        "--u", &u_path, "--v", &v_path,
    ]);
    let loaded = stdout_json(&out);
    assert_eq!(loaded["branch"], "subcritical");
    assert_eq!(loaded["grid_cells"].as_u64().unwrap(), 128);
    let fresh = solved["pohozaev_residual"].as_f64().unwrap();
    let reloaded = loaded["residual"].as_f64().unwrap();
    assert!((fresh - reloaded).abs() <= 1e-12 * fresh.max(1.0), "{fresh} vs {reloaded}");
}

#[test]
fn scan_writes_csv_with_expected_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = run(&[
        "scan", "--p", "3", "--alphas", "0,40",
        "--grid", "32", "--grid-theta", "32",
        "--out", csv.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("alpha,s_rad,s_full,ratio,iters_rad,iters_full\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn invalid_exponent_yields_structured_error() {
    let out = run(&["solve-scalar", "--N", "3", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"], "invalid_spec");
    assert!(err["message"].as_str().unwrap().contains("p"));
}

#[test]
fn hypothesis_violation_yields_its_own_code() {
    // Supercritical system tuple: gap < 0 rejects the radial solve.
    let out = run(&["solve-system", "--N", "6", "--p", "8", "--q", "8", "--grid", "64"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"], "hypothesis_violation");
}
