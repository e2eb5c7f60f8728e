use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavedfs"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn record(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a run record")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("cfg.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn build_dfs_reports_plan_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["build-dfs", "--config", fixture("six_sensors_known.json").to_str().unwrap(), "--out", out, "--svg"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = record(&o);
    let amps: Vec<f64> = r["summary"]["amplitudes"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (g, w) in amps.iter().zip([0.36, 0.82, 0.33, 0.81, 0.74, 1.00]) {
        assert!((g - w).abs() <= 0.05, "{amps:?}");
    }
    let hash = r["scenario_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), format!("# scenario_hash={hash}"));
    assert_eq!(csv.lines().nth(1).unwrap(), "alpha,g2_fast_cos,g2_fast_sin,g2_slow_cos,g2_slow_sin");
    let svg = std::fs::read_to_string(dir.path().join("spectrum.svg")).unwrap();
    assert!(svg.lines().nth(1).unwrap().starts_with("<!-- wavedfs "));
    for key in ["command", "outputs", "wall_time_s", "version", "seed", "violations"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let cfg = fixture("six_sensors_unknown.json");
    let mut files = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        for fmt in ["csv", "json"] {
            let o = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--format", fmt]);
            assert_eq!(o.status.code(), Some(0));
        }
        files.push((
            std::fs::read(dir.path().join("spectrum.csv")).unwrap(),
            std::fs::read(dir.path().join("spectrum.json")).unwrap(),
        ));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn seed_enters_the_hash() {
    let cfg = fixture("six_sensors_known.json");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let a = record(&run(&["build-dfs", "--config", cfg.to_str().unwrap(), "--out", out]));
    let b = record(&run(&["build-dfs", "--config", cfg.to_str().unwrap(), "--out", out, "--seed", "5"]));
    assert_ne!(a["scenario_hash"], b["scenario_hash"]);
    assert_eq!(b["seed"], 5);
}

#[test]
fn injected_fault_exits_with_violation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bounds", "--samples", "500", "--inject-fault", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let r = record(&o);
    assert!(!r["violations"].as_array().unwrap().is_empty());
    assert!(dir.path().join("bounds.json").exists());
}

#[test]
fn config_and_usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    // Two unknown-phase noise waves span every field on two sensors.
    let cfg = write_config(
        dir.path(),
        r#"{"sensors": [[0,0],[1,0]], "waves": [
            {"role":"noise","direction":0.3,"phi":"unknown"},{"role":"noise","direction":2.0,"phi":"unknown"},
            {"role":"signal","direction":1.0}]}"#,
    );
    assert_eq!(run(&["build-dfs", "--config", cfg.to_str().unwrap(), "--out", out]).status.code(), Some(1));
    let cfg = write_config(dir.path(), r#"{"sensorz": []}"#);
    assert_eq!(run(&["build-dfs", "--config", cfg.to_str().unwrap(), "--out", out]).status.code(), Some(1));
    assert_eq!(run(&["build-dfs", "--out", out]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["circular", "--n", "3", "--out", out]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn circular_and_placement_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["circular", "--n", "2,4,6", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("circular.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let o = run(&["placement", "--config", fixture("placement_three.json").to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(record(&o)["summary"]["sensors"], 8);
    let sensors = std::fs::read_to_string(dir.path().join("sensors.csv")).unwrap();
    assert_eq!(sensors.lines().count(), 10);
}

#[test]
fn scaling_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scaling", "--m", "2,3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = record(&o)["summary"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let (qe, qp, cp) = (r["qfi_ent"].as_f64().unwrap(), r["qfi_prod"].as_f64().unwrap(), r["cfi_prod"].as_f64().unwrap());
        assert!(qe >= qp && cp <= qp * (1.0 + 1e-9));
    }
}
