use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("alphadiv-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_alphadiv")).args(args).env("ALPHADIV_WORKERS", "1").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn eppf_check_total_is_one() {
    let dir = scratch("eppf");
    let cfg = write_config(&dir, r#"{"schema_version": 1, "seed": 3, "n": 6, "replicates": 20000, "params": {"family": "gg", "beta": 1.0}}"#);
    let out = dir.join("out");
    let (code, err) = run(&["eppf-check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let m = manifest(&out);
    let total = m["summary"]["total_probability"].as_f64().unwrap();
    assert!((total - 1.0).abs() <= 1e-7);
    let table = fs::read_to_string(out.join("eppf_check.csv")).unwrap();
    // header plus one row per integer partition of 6
    assert_eq!(table.lines().count(), 1 + 11);
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = scratch("determinism");
    let cfg = write_config(
        &dir,
        r#"{"schema_version": 1, "seed": 11, "n": 60, "t_max": 0.5, "points": 11, "replicates": 3,
            "params": {"family": "gg", "beta": 2.0}}"#,
    );
    let digests = |tag: &str, workers: &str| {
        let out = dir.join(tag);
        let status = Command::new(env!("CARGO_BIN_EXE_alphadiv"))
            .args(["particles", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .env("ALPHADIV_WORKERS", workers)
            .status()
            .unwrap();
        assert!(status.success());
        manifest(&out)["files"].clone()
    };
    let a = digests("a", "1");
    let b = digests("b", "2");
    assert_eq!(a, b);
    assert_eq!(a.as_array().unwrap().len(), 6);
    let c = {
        let out = dir.join("c");
        run(&["particles", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "12"]);
        manifest(&out)["files"].clone()
    };
    assert_ne!(a, c);
}

#[test]
fn figure1_writes_three_paths() {
    let dir = scratch("figure1");
    let cfg = write_config(&dir, r#"{"schema_version": 1, "seed": 1, "steps": 20000, "record_every": 100}"#);
    let out = dir.join("out");
    let (code, err) = run(&["figure1", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    for beta in ["0", "100", "1000"] {
        let text = fs::read_to_string(out.join(format!("figure1_beta{beta}.csv"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("step,time_rescaled,value"));
        assert_eq!(lines.next().unwrap(), format!("0,0,{}", 1.0 / 200f64.sqrt()));
        assert_eq!(text.lines().count(), 1 + 201);
    }
    let files = manifest(&out)["files"].as_array().unwrap().len();
    assert_eq!(files, 3);
}

#[test]
fn frequency_paths_have_fifty_columns() {
    let dir = scratch("conditioned");
    let cfg = write_config(&dir, r#"{"schema_version": 1, "seed": 5, "n": 40, "k": 6, "t_max": 1.0, "points": 5}"#);
    let out = dir.join("out");
    let (code, err) = run(&["conditioned", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let table: Value = serde_json::from_str(&fs::read_to_string(out.join("conditioned_r0.json")).unwrap()).unwrap();
    assert_eq!(table["columns"].as_array().unwrap().len(), 52);
    assert_eq!(table["columns"][51], "z50");
    assert_eq!(table["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn manifest_checksums_match_files() {
    use sha2::{Digest, Sha256};
    let dir = scratch("manifest");
    let cfg = write_config(&dir, r#"{"schema_version": 1, "seed": 2, "params": {"family": "gg", "beta": 1.0}, "points": 9}"#);
    let out = dir.join("out");
    assert_eq!(run(&["boundary", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).0, 0);
    let m = manifest(&out);
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["seed"], 2);
    for f in m["files"].as_array().unwrap() {
        let body = fs::read(out.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&body)));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = scratch("usage");
    let out = dir.join("out");
    let out = out.to_str().unwrap();
    let no_seed = write_config(&dir, r#"{"schema_version": 1, "params": {"family": "gg", "beta": 1.0}}"#);
    assert_eq!(run(&["weights", "--config", no_seed.to_str().unwrap(), "--out", out]).0, 2);
    let bad_version = dir.join("v.json");
    fs::write(&bad_version, r#"{"schema_version": 9, "seed": 1}"#).unwrap();
    assert_eq!(run(&["weights", "--config", bad_version.to_str().unwrap(), "--out", out]).0, 2);
    let unknown = dir.join("u.json");
    fs::write(&unknown, r#"{"schema_version": 1, "seed": 1, "bogus": 3}"#).unwrap();
    assert_eq!(run(&["weights", "--config", unknown.to_str().unwrap(), "--out", out]).0, 2);
    assert_eq!(run(&["no-such-experiment", "--config", unknown.to_str().unwrap()]).0, 2);
    let bad_alpha = dir.join("a.json");
    fs::write(&bad_alpha, r#"{"schema_version": 1, "seed": 1, "params": {"family": "gg", "beta": 1.0, "alpha": 1.5}}"#).unwrap();
    assert_eq!(run(&["weights", "--config", bad_alpha.to_str().unwrap(), "--out", out]).0, 2);
}

#[test]
fn numerical_failure_exits_with_three() {
    // The singleton pmf is refused beyond n = 40 for loss of precision.
    let dir = scratch("numerical");
    let cfg = write_config(&dir, r#"{"schema_version": 1, "seed": 1, "n": 60, "params": {"family": "gg", "beta": 1.0}}"#);
    let out = dir.join("out");
    let (code, err) = run(&["m1-check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn weights_table_satisfies_constraint() {
    let dir = scratch("weights");
    let cfg = write_config(&dir, r#"{"schema_version": 1, "seed": 1, "n": 30, "params": {"family": "gg", "beta": 2.0}}"#);
    let out = dir.join("out");
    assert_eq!(run(&["weights", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).0, 0);
    let worst = manifest(&out)["summary"]["max_abs_residual"].as_f64().unwrap();
    assert!(worst <= 1e-7, "{worst}");
    let pd = write_config(&dir, r#"{"schema_version": 1, "seed": 1, "n": 5, "params": {"family": "pd", "theta": 1.0}}"#);
    assert_eq!(run(&["weights", "--config", pd.to_str().unwrap(), "--out", out.to_str().unwrap()]).0, 0);
}
