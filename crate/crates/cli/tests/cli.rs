use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fuplab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuplab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn words_count_matches_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&fuplab(&["words", "count", "--n0", "12", "--alpha", "0.25", "--verify", "--json"], dir.path()));
    assert_eq!(v["n_uncontrolled"], 79);
    assert_eq!(v["exhaustive_agrees"], true);
    assert_eq!(v["block_bound_holds"], true);
}

#[test]
fn csv_has_a_header_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = fuplab(&["words", "count", "--n0", "12", "--alpha", "0.25"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let col = headers.iter().position(|h| h == "n_uncontrolled").unwrap();
    assert_eq!(&row[col], "79");
}

#[test]
fn malformed_config_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"command\": \"words count\",\n").unwrap();
    let out = fuplab(&["--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn unknown_params_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"command": "words count", "params": {"n0": 12, "alfa": 0.25}}"#).unwrap();
    let out = fuplab(&["--config", "c.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alfa"));
}

#[test]
fn config_params_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"command": "words count", "params": {"n0": 10, "alpha": 0.25}, "format": "json"}"#).unwrap();
    let v = json(&fuplab(&["--config", "c.json"], dir.path()));
    assert_eq!(v["n0"], 10);
    let v = json(&fuplab(&["--config", "c.json", "words", "count", "--n0", "12"], dir.path()));
    assert_eq!(v["n_uncontrolled"], 79);
    let out = fuplab(&["--config", "c.json", "words", "params", "--h", "0.01"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_porous_embed_exits_3_naming_the_operation() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("full.json"), r#"{"parts": [[0, 1]]}"#).unwrap();
    let out = fuplab(&["embed", "--input", "full.json", "--nu", "0.5", "--alpha0", "0.01"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("embed_porous"));
}

#[test]
fn randomized_commands_require_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["porosity", "--random", "--nu", "0.25", "--alpha0", "0.001"][..],
        &["flow", "hit", "--points", "2"][..],
    ] {
        let out = fuplab(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    }
}

#[test]
fn outputs_are_deterministic_and_paired_with_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = fuplab(
            &["flow", "witness", "--points", "2", "--sweep-points", "10", "--tau-grid", "1,0.5", "--seed", "9", "--output", name],
            dir.path(),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let manifest: Value = serde_json::from_slice(&std::fs::read(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_echo"]["command"], "flow witness");
    assert_eq!(manifest["config_echo"]["seed"], 9);
    assert!(manifest["wall_time"].as_f64().unwrap() >= 0.0);
}

#[test]
fn manifest_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = fuplab(
        &["porosity", "--random", "--nu", "0.25", "--alpha0", "0.001", "--seed", "4", "--json", "--output", "p.json"],
        dir.path(),
    );
    assert!(first.status.success());
    let manifest: Value = serde_json::from_slice(&std::fs::read(dir.path().join("p.json.manifest.json")).unwrap()).unwrap();
    let mut config = manifest["config_echo"].clone();
    config["output"] = "q.json".into();
    std::fs::write(dir.path().join("replay.json"), config.to_string()).unwrap();
    assert!(fuplab(&["--config", "replay.json"], dir.path()).status.success());
    let p = std::fs::read(dir.path().join("p.json")).unwrap();
    let q = std::fs::read(dir.path().join("q.json")).unwrap();
    assert_eq!(p, q);
    let v: Value = serde_json::from_slice(&p).unwrap();
    assert_eq!(v["report"]["certified"], true);
}

#[test]
fn emitted_sets_reload() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&fuplab(&["porosity", "--cantor-level", "5", "--nu", "0.3", "--alpha0", "0.01", "--json"], dir.path()));
    let set: fuplab_core::IntervalSet = serde_json::from_value(v["set"].clone()).unwrap();
    assert_eq!(set, fuplab_core::intervals::triadic_cantor(5));
}

#[test]
fn small_fup_sweep_runs() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&fuplab(
        &["fup", "--cantor-level", "4", "--h-min-exp", "4", "--h-max-exp", "6", "--json"],
        dir.path(),
    ));
    let rows = v["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r["norm_masked"].as_f64().unwrap() <= r["norm_unmasked"].as_f64().unwrap() + 1e-9);
    }
}
