use std::process::{Command, Output};

use serde_json::Value;

fn ett(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ett")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Vec<Value> {
    serde_json::from_slice::<Value>(&out.stdout).unwrap().as_array().unwrap().clone()
}

#[test]
fn rectangular_times_report() {
    let out = ett(&["times", "--barrier", "rect", "--v0", "1", "--length", "2", "--energy", "0.5", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = &json(&out)[0];
    let get = |k: &str| r[k].as_f64().unwrap();
    assert!((get("phi") - 2.0).abs() < 1e-12);
    assert!((get("tau_c") - 2.0).abs() < 1e-12);
    assert!((get("ett") - 0.116306).abs() < 1e-6);
    assert!(r["phase_time"].is_f64() && r["dwell_time"].is_f64());
    assert_eq!(r["p_t_kind"], "exact-rectangular");
}

#[test]
fn helium_classical_time_in_attoseconds() {
    let out = ett(&[
        "times", "--barrier", "laser-coulomb", "--field", "0.04", "--zeff", "kullie", "--energy", "-0.904", "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let tau = json(&out)[0]["tau_c_lab"].as_f64().unwrap();
    assert!((tau / 850.73 - 1.0).abs() < 0.01, "{tau}");
}

#[test]
fn over_barrier_is_a_numeric_error() {
    let out = ett(&["times", "--barrier", "rect", "--v0", "1", "--length", "2", "--energy", "1.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("OverBarrier"));
}

#[test]
fn missing_parameters_are_usage_errors() {
    let out = ett(&["times", "--barrier", "rect", "--v0", "1", "--energy", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--length"));
    assert_eq!(ett(&["times", "--barrier", "rect"]).status.code(), Some(2));
    assert_eq!(ett(&["he-scan", "--models", "neon"]).status.code(), Some(2));
    assert_eq!(ett(&["he-scan", "--steps", "1"]).status.code(), Some(2));
}

#[test]
fn unit_overrides_convert_inputs() {
    let au = ett(&["times", "--barrier", "rect", "--v0", "1", "--length", "2", "--energy", "0.5", "--format", "json"]);
    let lab = ett(&[
        "times", "--barrier", "rect", "--v0", "27.211386245", "--length", "1.0583544218", "--energy", "13.6056931225",
        "--unit", "ev,angstrom,fs", "--format", "json",
    ]);
    assert!(lab.status.success(), "{}", stderr(&lab));
    let (a, l) = (&json(&au)[0], &json(&lab)[0]);
    let ett_au = a["ett"].as_f64().unwrap();
    assert!((l["ett"].as_f64().unwrap() / ett_au - 1.0).abs() < 1e-9);
    assert_eq!(l["time_unit"], "fs");
    assert!((l["ett_lab"].as_f64().unwrap() / (a["ett_lab"].as_f64().unwrap() / 1000.0) - 1.0).abs() < 1e-9);
}

#[test]
fn table1_passes_and_reports_cells() {
    let out = ett(&["table1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 7);
    let diag = stderr(&out);
    assert_eq!(diag.lines().filter(|l| l.ends_with("pass") || l.contains(" pass ")).count(), 24);
    assert!(diag.contains("24/24 cells within tolerance"));
}

#[test]
fn he_scan_rows_and_determinism() {
    let args = ["he-scan", "--field-min", "0.04", "--field-max", "0.11", "--steps", "15", "--models", "sae,kullie,clementi"];
    let a = ett(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 46);
    assert!(text.starts_with("field,model,ett_as,tau_c_as,exp_width,true_width,phi,keldysh_gamma\n"));
    assert_eq!(a.stdout, ett(&args).stdout);
}

#[test]
fn he_scan_skips_over_barrier_fields() {
    let out = ett(&["he-scan", "--field-min", "0.1", "--field-max", "0.3", "--steps", "3", "--models", "clementi"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 2);
    assert!(stderr(&out).contains("skipping"));
}

#[test]
fn keldysh_column_follows_omega() {
    let out = ett(&["he-scan", "--steps", "2", "--models", "sae", "--omega", "0.0228", "--format", "json"]);
    let rows = json(&out);
    let g = rows[0]["keldysh_gamma"].as_f64().unwrap();
    assert!((g - 0.7665).abs() < 1e-3);
    let out = ett(&["he-scan", "--steps", "2", "--models", "sae", "--format", "json"]);
    assert!(json(&out)[0]["keldysh_gamma"].is_null());
}

#[test]
fn et_scan_json_grid() {
    let out = ett(&["et-scan", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = json(&out);
    assert_eq!(rows.len(), 5 * 26);
    assert!(rows.iter().all(|r| r["comparable_flag"].is_boolean()));
    assert!(rows.iter().all(|r| r["ett_fs"].as_f64() < r["tau_c_fs"].as_f64()));
}

#[test]
fn oracle_agrees_with_exact_rectangle() {
    let out = ett(&["oracle", "--barrier", "rect", "--v0", "1", "--length", "2", "--energy", "0.5", "--format", "json"]);
    let r = &json(&out)[0];
    let (pt, exact) = (r["p_t"].as_f64().unwrap(), r["p_t_exact"].as_f64().unwrap());
    assert!((pt / exact - 1.0).abs() < 1e-6);
    assert!((pt + r["p_r"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let out = ett(&["oracle", "--barrier", "laser-coulomb", "--field", "0.04", "--energy", "-0.904"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("DomainError"));
}

#[test]
fn tabulated_barrier_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gauss.dat");
    let text: String = (0..=80)
        .map(|i| {
            let x = -4.0 + 0.1 * i as f64;
            format!("{x} {}\n", (-x * x).exp())
        })
        .collect();
    std::fs::write(&path, format!("# x V\n{text}")).unwrap();
    let file = path.to_str().unwrap();
    let out = ett(&["times", "--barrier", "tabulated", "--file", file, "--energy", "0.5", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = &json(&out)[0];
    assert!((r["x_right"].as_f64().unwrap() - 0.5f64.ln().abs().sqrt()).abs() < 1e-3);
    let out = ett(&["oracle", "--barrier", "tabulated", "--file", file, "--energy", "0.5"]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("et.csv");
    let out = ett(&["et-scan", "--delta-e", "0.1,0.2", "--lengths", "5,10", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, ett(&["et-scan", "--delta-e", "0.1,0.2", "--lengths", "5,10"]).stdout);
    assert_eq!(String::from_utf8(written).unwrap().lines().count(), 5);
}
