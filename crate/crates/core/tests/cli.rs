//! Black-box checks of the command line interface.

use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_invasim");

fn write_tiny_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("tiny.toml");
    std::fs::write(
        &path,
        r#"
[experiment]
preset = "exp0"
t_final = 0.01
snapshot_times = [0.0, 0.01]

[grid]
nx = 10
ny = 10
"#,
    )
    .unwrap();
    path
}

#[test]
fn simulate_writes_snapshots_and_reports_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_config(dir.path());
    let out = dir.path().join("run");
    let output = Command::new(BIN)
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    let line: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(line["status"], "ok");
    assert!(line["steps"].as_u64().unwrap() > 0);
    assert!(out.join("snapshots.csv").exists());
    assert!(out.join("report.csv").exists());
    assert!(out.join("snapshot_0001_c2.bin").exists());
}

#[test]
fn simulate_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_config(dir.path());
    let output = Command::new(BIN)
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args(["--tau", "3.0", "--grid", "8", "--t-final", "0.005"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
}

#[test]
fn compare_identical_runs_exits_zero_with_zero_norms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_config(dir.path());
    for name in ["a", "b"] {
        let output = Command::new(BIN)
            .args(["simulate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path().join(name))
            .output()
            .unwrap();
        assert!(output.status.success());
    }
    let output = Command::new(BIN)
        .arg("compare")
        .arg(dir.path().join("a"))
        .arg(dir.path().join("b"))
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    for line in stdout.lines() {
        assert!(line.contains("linf 0.000000e0") || line.contains("linf 0e0"), "{line}");
    }
}

#[test]
fn eoc_rejects_non_doubling_levels_with_machine_readable_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_config(dir.path());
    let output = Command::new(BIN)
        .args(["eoc", "--config"])
        .arg(&cfg)
        .args(["--levels", "10,15"])
        .arg("--out")
        .arg(dir.path().join("eoc"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    let line: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(line["status"], "error");
    assert!(line["message"].as_str().unwrap().contains("double"));
}

#[test]
fn eoc_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_config(dir.path());
    let out = dir.path().join("eoc");
    let output = Command::new(BIN)
        .args(["eoc", "--config"])
        .arg(&cfg)
        .args(["--levels", "10,20,40"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    assert!(out.join("eoc.csv").exists());
    assert!(out.join("timing.csv").exists());
}

#[test]
fn sweep_accepts_range_syntax() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_tiny_config(dir.path());
    let out = dir.path().join("sweep");
    let output = Command::new(BIN)
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--tau", "0:11:5"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let table = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    // header plus tau = 0, 5, 10
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn missing_config_fails_with_error_line() {
    let output = Command::new(BIN)
        .args(["simulate", "--config", "/nonexistent.toml"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    let line: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(line["status"], "error");
}
