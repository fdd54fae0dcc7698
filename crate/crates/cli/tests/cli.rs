use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

const J01: f64 = 2.404825557695773;
const J1_AT_J01: f64 = 0.5191474972894669;

fn drumcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drumcert")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn bessel_j0(x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= -(x * x) / (4.0 * (k * k) as f64);
        sum += term;
    }
    sum
}

#[test]
fn series_j0_vanishes_at_first_zero() {
    assert!(bessel_j0(J01).abs() < 1e-14);
}

#[test]
fn scan_finds_disk_minima() {
    let dir = tempfile::tempdir().unwrap();
    let minima = dir.path().join("minima.json");
    let o = drumcert(&[
        "scan",
        "--domain",
        "disk",
        "--e-range",
        "4:28",
        "--samples",
        "97",
        "--minima-out",
        minima.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("E,t,t_s,rank,method"));
    assert_eq!(lines.count(), 97);
    let found: Vec<f64> = serde_json::from_str::<Value>(&std::fs::read_to_string(&minima).unwrap()).unwrap()
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["energy"].as_f64().unwrap())
        .collect();
    // j01², j11², j21²
    for e in [5.783185962946784, 14.681970642123893, 26.374616427163247] {
        assert!(found.iter().any(|f| (f - e).abs() < 0.25), "{e} not among {found:?}");
    }
}

#[test]
fn solve_disk_ground_state() {
    let o = drumcert(&["solve", "--domain", "disk", "--e-guess", "5.8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let e = v["minimum"]["e_star"].as_f64().unwrap();
    assert!((e - J01 * J01).abs() < 1e-10 * e, "{e}");
    let cert = &v["certification"];
    let tight = cert["tightest"].as_str().unwrap();
    let iv = cert["intervals"].as_array().unwrap().iter().find(|i| i["kind"] == tight).unwrap();
    let r = iv["radius"].as_f64().unwrap();
    assert!((e - J01 * J01).abs() <= r && r < 1e-9);
}

#[test]
fn invalid_range_is_a_usage_error() {
    let o = drumcert(&["scan", "--domain", "disk", "--e-range", "30:4"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("30"));
    assert_eq!(code(&drumcert(&["scan", "--domain", "pentagon", "--e-range", "4:8"])), 2);
    assert_eq!(code(&drumcert(&["solve", "--domain", "disk", "--e-guess", "-3"])), 2);
    assert_eq!(code(&drumcert(&["solve", "--domain", "disk", "--e-guess", "6", "--delta", "0"])), 2);
}

#[test]
fn guess_in_a_gap_fails_numerically() {
    let o = drumcert(&["solve", "--domain", "disk", "--e-guess", "10.0", "--h0", "1e-3"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not converge"));
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"domain": "disk", "e_range": "5:7", "samples": 9, "delta": 0.2}"#).unwrap();
    let o = drumcert(&["--config", cfg.to_str().unwrap(), "scan"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 10);
    let o = drumcert(&["--config", cfg.to_str().unwrap(), "scan", "--samples", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 6);
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"domain": "disk", "e_range": "5:7", "tolerance": 1}"#).unwrap();
    let o = drumcert(&["--config", cfg.to_str().unwrap(), "scan"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerance"));
    let missing = dir.path().join("absent.json");
    assert_eq!(code(&drumcert(&["--config", missing.to_str().unwrap(), "scan"])), 2);
}

fn jsonl(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_suites_pass() {
    let o = drumcert(&["verify", "--suite", "rellich"]);
    assert_eq!(code(&o), 0);
    let recs = jsonl(&o);
    assert_eq!(recs.len(), 50);
    assert!(recs.iter().all(|r| r["pass"] == true && r["check"] == "rellich"));

    let o = drumcert(&["verify", "--suite", "pairwise", "--e-max", "300"]);
    assert_eq!(code(&o), 0);
    let recs = jsonl(&o);
    // pairs with repetition over the modes below 300
    let n = ((1.0 + 8.0 * recs.len() as f64).sqrt() - 1.0) / 2.0;
    assert_eq!(n.fract(), 0.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("0 violations"));

    let o = drumcert(&["verify", "--suite", "quasimode", "--e", "500", "--trials", "20", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(jsonl(&o).len(), 21);
    assert_eq!(code(&drumcert(&["verify", "--suite", "everything"])), 2);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "quasimode", "--e", "800", "--trials", "15", "--seed", "3"];
    assert_eq!(drumcert(&args).stdout, drumcert(&args).stdout);
}

fn write_mode_file(path: &Path, coeffs: &str) {
    let text = format!(
        r#"{{"domain": "disk", "energy": {}, "basis": {{"kind": "disk-modes", "modes": [[0, 1, "cos"]]}}, "coeffs": {coeffs}}}"#,
        J01 * J01
    );
    std::fs::write(path, text).unwrap();
}

#[test]
fn eval_mode_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("mode.json");
    write_mode_file(&file, "[1.0]");
    let o = drumcert(&["eval-mode", "--coeffs", file.to_str().unwrap(), "--grid-h", "0.1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let r = v[0].hypot(v[1]);
        assert!(r < 1.0);
        let expected = bessel_j0(J01 * r) / (std::f64::consts::PI.sqrt() * J1_AT_J01);
        assert!((v[2].abs() - expected.abs()).abs() < 1e-12, "r={r}: {} vs {expected}", v[2]);
        rows += 1;
    }
    // grid points strictly inside the unit circle at spacing 0.1
    let inside = (-10i32..=10)
        .flat_map(|j| (-10i32..=10).map(move |i| (i * i + j * j) as f64 * 0.01))
        .filter(|&r2| r2 < 1.0)
        .count();
    assert_eq!(rows, inside);
}

#[test]
fn eval_mode_rejects_empty_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("mode.json");
    write_mode_file(&file, "[]");
    assert_eq!(code(&drumcert(&["eval-mode", "--coeffs", file.to_str().unwrap()])), 2);
    write_mode_file(&file, "[1.0, 2.0]");
    assert_eq!(code(&drumcert(&["eval-mode", "--coeffs", file.to_str().unwrap()])), 2);
}

#[test]
fn certify_given_ground_state() {
    let e1 = J01 * J01;
    let args = [
        "certify",
        "--domain",
        "disk",
        "--e",
        "1000.0",
        "--t",
        "1e-9",
        "--t-s",
        "1.2e-9",
        "--e1",
        &e1.to_string(),
        "--e1-radius",
        "1e-12",
    ];
    let o = drumcert(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let kinds: Vec<&str> = v["intervals"].as_array().unwrap().iter().map(|i| i["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"MolerPayne") && kinds.contains(&"StarSharp"), "{kinds:?}");
    let mp = v["intervals"].as_array().unwrap().iter().find(|i| i["kind"] == "MolerPayne").unwrap();
    let c_mp = mp["constant"].as_f64().unwrap();
    assert!((mp["radius"].as_f64().unwrap() - c_mp * 1000.0 * 1e-9).abs() < 1e-18);
    assert_eq!(o.stdout, drumcert(&args).stdout);
}
