use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const TINY: &str = "function mpc = tiny
mpc.baseMVA = 100;
mpc.bus = [
\t1\t3\t0\t0\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
\t2\t1\t10\t0\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
\t3\t1\t0\t0\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
];
mpc.gen = [
\t1\t0\t0\t10\t-10\t1\t100\t1\t50\t0;
];
mpc.branch = [
\t1\t2\t0.01\t0.1\t0\t100\t100\t100\t0\t0\t1\t-30\t30;
\t2\t3\t0.01\t0.1\t0\t100\t100\t100\t0\t0\t1\t-30\t30;
\t2\t3\t0.01\t0.1\t0\t100\t100\t100\t0\t0\t1\t-30\t30;
];
";

fn gridergm(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridergm")).arg("--out").arg(out).args(args).output().unwrap()
}

fn case300() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pglib_opf_case300_ieee.m")
}

fn tiny(dir: &Path) -> PathBuf {
    let p = dir.join("tiny.m");
    std::fs::write(&p, TINY).unwrap();
    p
}

fn report_row(path: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().nth(1).unwrap().split(',').map(String::from).collect()
}

#[test]
fn analyze_tiny_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridergm(dir.path(), &["analyze", tiny(dir.path()).to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let row = report_row(&dir.path().join("tiny_report.csv"));
    assert_eq!(row[2], "2");
    assert_eq!(row[13], "0.0000");
}

#[test]
fn analyze_case300() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridergm(dir.path(), &["analyze", case300().to_str().unwrap()]);
    assert!(out.status.success());
    let row = report_row(&dir.path().join("pglib_opf_case300_ieee_report.csv"));
    assert_eq!((row[2].as_str(), row[10].as_str(), row[11].as_str()), ("409", "34", "14"));
}

#[test]
fn missing_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridergm(dir.path(), &["analyze", dir.path().join("missing.m").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn zero_steps_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridergm(dir.path(), &["estimate", case300().to_str().unwrap(), "--T", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn closed_form_on_case300() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridergm(dir.path(), &["closed-form", case300().to_str().unwrap()]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(dir.path().join("pglib_opf_case300_ieee_closed_form.csv")).unwrap();
    // the exact mean of every block recovers its target
    for line in table.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let (target, mean): (f64, f64) = (cells[1].parse().unwrap(), cells[4].parse().unwrap());
        assert!((target - mean).abs() < 1e-5, "{line}");
    }
}

#[test]
fn closed_form_boundary_names_the_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = gridergm(dir.path(), &["closed-form", tiny(dir.path()).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PL"));
}

#[test]
fn disconnected_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("split.m");
    std::fs::write(&p, "mpc.bus = [1 1 1 0; 2 1 1 0; 3 1 0 0];\nmpc.gen = [];\nmpc.branch = [1 2];\n").unwrap();
    let out = gridergm(dir.path(), &["estimate", p.to_str().unwrap(), "--T", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disconnected"));
}

#[test]
fn estimate_then_sample() {
    let dir = tempfile::tempdir().unwrap();
    let case = case300();
    let out = gridergm(dir.path(), &["estimate", case.to_str().unwrap(), "--T", "100000", "--model", "edges", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("accepted") && stdout.contains("disconnection"));
    let trace = std::fs::read_to_string(dir.path().join("pglib_opf_case300_ieee_trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 1000);

    let beta = dir.path().join("pglib_opf_case300_ieee_beta.json");
    let ens = dir.path().join("ens");
    let out = gridergm(&ens, &["sample", case.to_str().unwrap(), beta.to_str().unwrap(), "--steps", "50000", "--max-samples", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(ens.join("summary.csv")).unwrap();
    let std_row = summary.lines().last().unwrap();
    assert!(std_row.starts_with("std,") && std_row.split(',').skip(1).all(|v| v == "0.0000"));
    assert!(ens.join("samples/sample_00000.txt").exists());
}

#[test]
fn zero_thinning_keeps_every_accepted_state() {
    let dir = tempfile::tempdir().unwrap();
    let case = case300();
    let closed = gridergm(dir.path(), &["closed-form", case.to_str().unwrap()]);
    assert!(closed.status.success());
    let beta = dir.path().join("pglib_opf_case300_ieee_closed_form.json");
    let ens = dir.path().join("ens");
    let out = gridergm(&ens, &["sample", case.to_str().unwrap(), beta.to_str().unwrap(), "--steps", "2000", "--thin", "0", "--max-samples", "100000"]);
    assert!(out.status.success());
    let index: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(ens.join("ensemble.json")).unwrap()).unwrap();
    let origins = index["origins"].as_array().unwrap();
    assert!(!origins.is_empty());
    let steps: Vec<u64> = origins.iter().map(|o| o["step"].as_u64().unwrap()).collect();
    assert!(steps.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_env");
    let out = Command::new(env!("CARGO_BIN_EXE_gridergm"))
        .env("GRIDERGM_OUT_DIR", &target)
        .args(["analyze", tiny(dir.path()).to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("tiny_report.csv").exists());
}
