use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_cstar-norms");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn diag21(dir: &TempDir) -> PathBuf {
    write(dir, "diag21.json", r#"{"n":2,"re":[[2.0,0.0],[0.0,-1.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#)
}

fn jordan2(dir: &TempDir) -> PathBuf {
    write(dir, "j2.json", r#"{"n":2,"re":[[0.0,1.0],[0.0,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn norm_values() {
    let dir = TempDir::new().unwrap();
    let d = diag21(&dir);
    let j = jordan2(&dir);
    let op = run(&["norm", "op", p(&d)]);
    assert_eq!(code(&op), 0);
    assert_eq!(json(&op)["formatted"], "2.00000000000");
    let tr = run(&["norm", "trace", p(&d)]);
    assert!((json(&tr)["value"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    let omega = run(&["norm", "omega", p(&j)]);
    assert!((json(&omega)["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn norm_output_matches_golden() {
    let dir = TempDir::new().unwrap();
    let out = run(&["norm", "op", p(&diag21(&dir))]);
    let golden = include_str!("golden/norm_op_diag21.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn certify_exit_codes() {
    let refuted = run(&["certify", "schatten:2", "M", "2", "2", "500", "1"]);
    assert_eq!(code(&refuted), 3);
    let v = json(&refuted);
    assert_eq!(v["verdict"], "violation");
    assert!(v["defect"].as_f64().unwrap() >= 0.41);

    let clean = run(&["certify", "op", "M", "3", "3", "2000", "1"]);
    assert_eq!(code(&clean), 0);
    assert_eq!(json(&clean)["verdict"], "no-violation-found");
}

#[test]
fn certify_is_reproducible() {
    let a = run(&["certify", "schatten:2", "L", "2", "2", "200", "7"]);
    let b = run(&["certify", "schatten:2", "L", "2", "2", "200", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn search_writes_trace() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = run(&["search", "trace", "L", "--n", "2", "--budget", "50", "--trace", p(&trace)]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("evaluation,restart,defect,best"));
    assert!(lines.count() > 0);
}

#[test]
fn umin_dual_and_lmi() {
    let dir = TempDir::new().unwrap();
    let d = diag21(&dir);
    let umin = json(&run(&["umin", "op", p(&d)]));
    assert!((umin["lower_bound"].as_f64().unwrap() - 3.0).abs() < 1e-6);
    let dual = json(&run(&["dual", "op", p(&d)]));
    assert!((dual["lower_bound"].as_f64().unwrap() - 3.0).abs() < 1e-6);
    let lmi = run(&["lmi", "2t", "2(1-t)", p(&jordan2(&dir))]);
    assert_eq!(code(&lmi), 0);
    assert_eq!(json(&lmi)["feasible"], true);
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("norm.json");
    let out = run(&["norm", "op", p(&diag21(&dir)), "--out", p(&target)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["norm"], "op");
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    let d = diag21(&dir);
    assert_eq!(code(&run(&["norm", "bogus", p(&d)])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["certify", "op", "Q"])), 2);
    assert_eq!(code(&run(&["norm", "op", p(&d), "--tol", "defect=1e-3"])), 2);
    let missing = dir.path().join("missing.json");
    assert_ne!(code(&run(&["norm", "op", p(&missing)])), 0);
}

#[test]
fn suite_with_empty_selection() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"norms": []}"#);
    let out = run(&["suite", p(&cfg)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn suite_fails_under_impossible_tolerance() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let cfg = write(
        &dir,
        "cfg.json",
        &format!(r#"{{"norms": ["op"], "output_path": {:?}}}"#, p(&report)),
    );
    let out = run(&["suite", p(&cfg), "--tol", "eig_residual=1e-15"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let eig = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "00-eigh-residual")
        .expect("eigh check selected");
    assert_eq!(eig["status"], "fail");
}

#[test]
fn suite_rejects_unknown_config_keys() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"sed": 3}"#);
    assert_eq!(code(&run(&["suite", p(&cfg)])), 2);
    let cfg = write(&dir, "cfg2.json", r#"{"tolerances": {"nope": 1.0}}"#);
    assert_eq!(code(&run(&["suite", p(&cfg)])), 2);
}
