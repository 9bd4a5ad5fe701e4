use std::path::Path;
use std::process::{Command, Output};

use heralded_modes::experiment::{read_sweep_csv, SweepResult};

fn heralded(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heralded"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const SMALL: [&str; 4] = ["--grid-m", "120", "--B", "0,0.05,0.2"];

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let mut args = vec!["sweep"];
        args.extend(SMALL);
        args.extend(["--out", path.to_str().unwrap()]);
        assert_eq!(code(&heralded(&args)), 0);
        runs.push(std::fs::read(&path).unwrap());
    }
    assert!(!runs[0].is_empty());
    assert!(runs[0] == runs[1], "two runs wrote different bytes");
}

#[test]
fn csv_and_json_agree_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let json = dir.path().join("s.json");
    let run = |path: &Path, format: &str| {
        let mut args = vec!["sweep", "--photons", "2", "--jitter", "rect"];
        args.extend(SMALL);
        args.extend(["--format", format, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&heralded(&args)), 0);
    };
    run(&csv, "csv");
    run(&json, "json");
    let (cfg_csv, records) = read_sweep_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let doc: SweepResult = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(records, doc.records);
    assert_eq!(cfg_csv.photons, 2);
    assert_eq!(doc.config.divisions, 120);
    assert_eq!(doc.provenance.oracle_check.status, "passed");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "B,purity,fidelity,lambda1,lambda2,lambda3,lambda4,lambda5,overlap_r"
    );
}

#[test]
fn every_output_echoes_the_config() {
    let out = heralded(&["sweep", "--grid-m", "50", "--B", "0.1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    for key in [
        "\"photons\":1",
        "\"divisions_M\":50",
        "\"span_T\":10.0",
        "\"B_values\":[0.1]",
    ] {
        assert!(first.contains(key), "{key} missing from {first}");
    }
    let out = heralded(&["sweep", "--grid-m", "50", "--B", "0.1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["jitter"], "gaussian");
    assert_eq!(v["provenance"]["kernel_paths"][0], "analytic-gaussian");
}

#[test]
fn modes_tables_per_b() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("m.csv");
    let out = heralded(&["modes", "--grid-m", "100", "--out", base.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    for b in ["0.05", "0.25", "1"] {
        let text = std::fs::read_to_string(dir.path().join(format!("m_B{b}.csv"))).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# config: "));
        assert_eq!(lines.next().unwrap(), format!("# B: {b}"));
        assert_eq!(lines.next().unwrap(), "t,f1,f2,r_norm");
        assert_eq!(lines.count(), 100);
    }
}

#[test]
fn delta_modes_equal_envelope() {
    let out = heralded(&[
        "modes", "--jitter", "delta", "--B", "0.3", "--grid-m", "200",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(3) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((v[1] - v[3]).abs() < 1e-10);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&heralded(&["sweep", "--B", "0.2,0.1"])), 2);
    assert_eq!(code(&heralded(&["sweep", "--photons", "3"])), 2);
    assert_eq!(code(&heralded(&["sweep", "--grid-m", "5000"])), 2);
    assert_eq!(code(&heralded(&["sweep", "--preset", "fig9"])), 2);
    assert_eq!(code(&heralded(&["sweep", "--jitter", "square"])), 2);
    let bad = heralded(&[
        "sweep",
        "--B",
        "0.1",
        "--grid-m",
        "40",
        "--out",
        "/nonexistent/x/y.csv",
    ]);
    assert_eq!(code(&bad), 4);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("/nonexistent/x/y.csv"));
    let named = heralded(&["sweep", "--B", "0.3,0.2"]);
    assert!(String::from_utf8_lossy(&named.stderr).contains("B_values"));
}

#[test]
fn validate_command() {
    let ok = heralded(&["validate"]);
    assert_eq!(code(&ok), 0);
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));

    let broken = heralded(&["validate", "--inject-fault", "--kernel-points", "200"]);
    assert_eq!(code(&broken), 3);
    let text = String::from_utf8(broken.stdout).unwrap();
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("gaussian analytic kernel"));

    let limit = heralded(&["validate", "--oracle-m", "30"]);
    assert_eq!(code(&limit), 2);
    assert!(String::from_utf8_lossy(&limit.stderr).contains("resource limit"));
}
