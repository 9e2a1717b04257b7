use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn cylnlw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylnlw")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn run_to(dir: &Path, cmd: &str, config: &str, out: &str, extra: &[&str]) -> (Output, PathBuf) {
    let out_dir = dir.join(out);
    let mut args = vec![cmd, "--config", config, "--out", out_dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    (cylnlw(&args), out_dir)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

const TAILS: &str = r#"{
    "modes": {"n_max": 6, "nprime_max": 6},
    "ensemble": {"alpha": 2.0, "flavor": "real_pair", "seed": 11},
    "functional": {"kind": "spatial_lp", "s": 0.0, "p": 4.0},
    "samples": 200,
    "lambda_grid": [0.3, 0.5, 0.7]
}"#;

#[test]
fn zeros_single_row() {
    let out = cylnlw(&["zeros", "--n-max", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lambda = column(&text, "lambda");
    assert_eq!(lambda.len(), 1);
    assert!((lambda[0] - 2.404826).abs() < 1e-6);
}

#[test]
fn zeros_deviation_decays_like_one_over_n() {
    let out = cylnlw(&["zeros", "--n-max", "200"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let dev = column(&text, "deviation");
    assert_eq!(dev.len(), 200);
    assert!(dev.iter().enumerate().all(|(i, d)| (i + 1) as f64 * d.abs() <= 0.05));
}

#[test]
fn zero_n_max_is_a_usage_error() {
    let out = cylnlw(&["zeros", "--n-max", "0"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_keys_are_config_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"n_max": 3, "nmax": 4}"#);
    assert_eq!(code(&cylnlw(&["zeros", "--config", &cfg])), 2);
    let cfg = write_config(dir.path(), "tails.json", &TAILS.replace("\"samples\"", "\"sample\""));
    assert_eq!(code(&run_to(dir.path(), "tails", &cfg, "run", &[]).0), 2);
    assert_eq!(code(&cylnlw(&["tails", "--config", "/nonexistent.json", "--out", "x"])), 2);
}

#[test]
fn out_directory_is_write_once() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "tails.json", TAILS);
    let (first, _) = run_to(dir.path(), "tails", &cfg, "run", &[]);
    assert_eq!(code(&first), 0);
    let (second, _) = run_to(dir.path(), "tails", &cfg, "run", &[]);
    assert_eq!(code(&second), 1);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "tails.json", TAILS);
    let (_, a) = run_to(dir.path(), "tails", &cfg, "a", &["--threads", "1"]);
    let (_, b) = run_to(dir.path(), "tails", &cfg, "b", &["--threads", "3"]);
    for name in ["values.csv", "tails.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let (_, c) = run_to(dir.path(), "tails", &cfg, "c", &["--seed", "12"]);
    assert_ne!(fs::read(a.join("values.csv")).unwrap(), fs::read(c.join("values.csv")).unwrap());
}

#[test]
fn manifest_echoes_the_resolved_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "tails.json", TAILS);
    let (_, run) = run_to(dir.path(), "tails", &cfg, "run", &["--seed", "99"]);
    let manifest = json(&run.join("manifest.json"));
    assert_eq!(manifest["command"], "tails");
    assert_eq!(manifest["status"], "complete");
    assert_eq!(manifest["config"]["ensemble"]["seed"], 99);
    assert_eq!(manifest["config"]["dealias"], 2.0);
    let outputs: Vec<&str> = manifest["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(outputs, ["values.csv", "tails.csv", "summary.json"]);
}

#[test]
fn admissible_reports_the_threshold() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "adm.json",
        r#"{"scan": {"alpha_min": 1.05, "alpha_max": 2.5, "alpha_points": 10,
                     "gamma_min": 1.0, "gamma_max": 4.0, "gamma_points": 31}}"#,
    );
    let (out, run) = run_to(dir.path(), "admissible", &cfg, "run", &[]);
    assert_eq!(code(&out), 0);
    let t = json(&run.join("summary.json"))["gwp_threshold"].as_f64().unwrap();
    assert!((t - 3.33187).abs() < 1e-3, "{t}");
    let region = fs::read_to_string(run.join("region.csv")).unwrap();
    assert_eq!(region.lines().count(), 1 + 10 * 31);
}

#[test]
fn linear_evolution_keeps_the_energy() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "evolve.json",
        r#"{"modes": {"n_max": 8, "nprime_max": 4},
            "data": {"kind": "ensemble", "alpha": 2.0, "seed": 7, "amplitude": 4.0},
            "T": 0.5, "solver": {"dt": 0.01, "nonlinear": false}}"#,
    );
    let (out, run) = run_to(dir.path(), "evolve", &cfg, "run", &[]);
    assert_eq!(code(&out), 0);
    let energy = column(&fs::read_to_string(run.join("trajectory.csv")).unwrap(), "energy");
    assert_eq!(energy.len(), 51);
    assert!(energy.iter().all(|e| (e - energy[0]).abs() <= 1e-12 * energy[0]));
}

#[test]
fn snapshots_feed_back_into_evolve() {
    let dir = TempDir::new().unwrap();
    let sample = write_config(
        dir.path(),
        "sample.json",
        r#"{"modes": {"n_max": 5, "nprime_max": 3},
            "ensemble": {"alpha": 2.0, "seed": 1}, "count": 2, "s": [0, 1], "snapshots": true}"#,
    );
    let (out, samples) = run_to(dir.path(), "sample", &sample, "samples", &[]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(samples.join("samples.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "sample_id,h0_norm,h1_norm");
    let snapshot = samples.join("sample_000001.bin");
    let evolve = write_config(
        dir.path(),
        "evolve.json",
        &format!(
            r#"{{"modes": {{"n_max": 5, "nprime_max": 3}}, "data": {{"kind": "snapshot", "path": {:?}}},
                "T": 0.1, "solver": {{"dt": 0.01}}}}"#,
            snapshot.to_str().unwrap()
        ),
    );
    let (out, run) = run_to(dir.path(), "evolve", &evolve, "run", &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let h1 = column(&fs::read_to_string(run.join("trajectory.csv")).unwrap(), "h1_norm");
    assert_eq!(h1[0], column(&csv, "h1_norm")[1]);

    let mismatched = write_config(
        dir.path(),
        "mismatch.json",
        &fs::read_to_string(&evolve).unwrap().replace("\"n_max\": 5", "\"n_max\": 6"),
    );
    assert_eq!(code(&run_to(dir.path(), "evolve", &mismatched, "other", &[]).0), 2);
}

#[test]
fn numerical_failure_exit_code() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "evolve.json",
        r#"{"modes": {"n_max": 8, "nprime_max": 4},
            "data": {"kind": "ensemble", "alpha": 2.0, "seed": 7, "flavor": "real_pair", "amplitude": 300.0},
            "T": 0.5, "solver": {"dt": 0.25}}"#,
    );
    let (out, _) = run_to(dir.path(), "evolve", &cfg, "run", &[]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Picard"));
}

#[test]
fn highlow_run_writes_records() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "hl.json",
        r#"{"L": 8, "delta": 0.05, "T": 0.2, "alpha": 2.0, "seed": 2024,
            "n_max": 8, "nprime_max": 12, "sigma": 0.5, "solver": {"dt": 0.01}}"#,
    );
    let (out, run) = run_to(dir.path(), "highlow", &cfg, "run", &[]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(run.join("highlow.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let summary = json(&run.join("summary.json"));
    assert!(summary["telescoping_defect"].as_f64().unwrap() <= 1e-8);
    assert_eq!(json(&run.join("manifest.json"))["config"]["budget_m"], 1.0);
}

#[test]
fn diagnose_reports_trends() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "diag.json",
        r#"{"strichartz": {"spec": {"p": 4, "q": 4, "s": 0.3, "t_final": 1, "n_time": 16},
                           "data": {"kind": "focused"},
                           "levels": [{"n_max": 4, "nprime_max": 2}, {"n_max": 8, "nprime_max": 4}]}}"#,
    );
    let (out, run) = run_to(dir.path(), "diagnose", &cfg, "run", &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&run.join("summary.json"));
    assert_eq!(summary["strichartz"]["maxima"].as_array().unwrap().len(), 2);
    assert!(run.join("strichartz_level1.csv").exists());
    assert!(!run.join("embedding_level0.csv").exists());

    let empty = write_config(dir.path(), "empty.json", "{}");
    assert_eq!(code(&run_to(dir.path(), "diagnose", &empty, "none", &[]).0), 2);
}
