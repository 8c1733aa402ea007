use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K2222: &str = r#"{"kind": "bipartite", "rows": [2, 2, 2, 2], "cols": [2, 2, 2, 2]}"#;

fn degchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degchain")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mixing_times_of_the_four_by_four_space() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.json", K2222);
    let plain = json(&degchain(&["mixing", "--degrees", s(&k), "--chain", "switch", "--eps", "0.001"]));
    assert_eq!(plain["tau"], 28);
    assert_eq!(plain["schema"], "degchain.v1");
    let projected = json(&degchain(&["mixing", "--degrees", s(&k), "--chain", "switch", "--eps", "0.001", "--projected"]));
    assert_eq!(projected["tau"], 6);
    let lifted = json(&degchain(&["mixing", "--degrees", s(&k), "--lifted"]));
    assert_eq!(lifted["tau"], 6);
}

#[test]
fn classes_of_the_four_by_four_space() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.json", K2222);
    let out = json(&degchain(&["classes", "--degrees", s(&k)]));
    assert_eq!(out["num_states"], 90);
    assert_eq!(out["class_sizes"], serde_json::json!([18, 72]));
    assert_eq!(out["representatives"][0]["connected"], false);
}

#[test]
fn project_and_spectrum() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.json", K2222);
    let out = json(&degchain(&["project", "--degrees", s(&k)]));
    let q = &out["projected_matrix"];
    assert!((q[0][1].as_f64().unwrap() - 4.0 / 7.0).abs() < 1e-12);
    assert!((out["stationary"][1].as_f64().unwrap() - 0.8).abs() < 1e-12);
    let csv = degchain(&["spectrum", "--degrees", s(&k), "--projected", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,eigenvalue");
    assert_eq!(lines.len(), 3);
    // eigenvalues of [[3/7, 4/7], [1/7, 6/7]] are 1 and 2/7
    let second: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((second - 2.0 / 7.0).abs() < 1e-12);
}

#[test]
fn mixing_trace_as_csv() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.json", K2222);
    let out = degchain(&["mixing", "--degrees", s(&k), "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,distance\n"));
    assert_eq!(text.lines().count(), 1 + 29);
}

#[test]
fn family_output_is_a_degree_file() {
    let dir = TempDir::new().unwrap();
    let out = degchain(&["family", "5.2", "2"]);
    let family = json(&out);
    assert_eq!(family["rows"], serde_json::json!([2, 2]));
    assert_eq!(family["cols"], serde_json::json!([1, 1, 1, 1]));
    let path = dir.path().join("family.json");
    fs::write(&path, &out.stdout).unwrap();
    assert_eq!(json(&degchain(&["enumerate", "--degrees", s(&path)]))["num_states"], 6);
    let named = json(&degchain(&["family", "quadratic", "3"]));
    assert_eq!(named["cols"], serde_json::json!([2, 2, 1, 1]));
}

#[test]
fn kind_flag_fills_in_and_must_agree() {
    let dir = TempDir::new().unwrap();
    let bare = write(&dir, "bare.json", r#"{"rows": [2, 2, 3, 2, 1]}"#);
    let out = json(&degchain(&["enumerate", "--degrees", s(&bare), "--kind", "undirected", "--full"]));
    assert_eq!(out["num_states"], 6);
    assert_eq!(out["states"].as_array().unwrap().len(), 6);
    let k = write(&dir, "k.json", K2222);
    assert_eq!(degchain(&["enumerate", "--degrees", s(&k), "--kind", "directed"]).status.code(), Some(1));
}

#[test]
fn matrix_file_input() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "g.txt", "3 3 directed\n0 1 0\n0 0 1\n1 0 0\n");
    assert_eq!(json(&degchain(&["enumerate", "--matrix", s(&m)]))["num_states"], 2);
    let out = json(&degchain(&["sample", "--matrix", s(&m), "--samples", "3", "--steps", "5"]));
    // switches cannot reverse a directed 3-cycle
    for r in out["samples"].as_array().unwrap() {
        assert_eq!(r["state"], serde_json::json!(["010", "001", "100"]));
    }
}

#[test]
fn verify_passes_on_a_small_space() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "house.json", r#"{"kind": "undirected", "rows": [2, 2, 3, 2, 1]}"#);
    let out = json(&degchain(&["verify", "--degrees", s(&k), "--samples", "5000"]));
    assert_eq!(out["passed"], true);
    assert_eq!(out["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.json", K2222);
    let infeasible = write(&dir, "bad.json", r#"{"kind": "bipartite", "rows": [3, 3], "cols": [1, 1]}"#);
    let triangle = write(&dir, "tri.json", r#"{"kind": "directed", "rows": [1, 1, 1], "cols": [1, 1, 1]}"#);
    let code = |args: &[&str]| degchain(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["enumerate"]), Some(1));
    assert_eq!(code(&["enumerate", "--bogus"]), Some(1));
    assert_eq!(code(&["classes", "--degrees", s(&k), "--format", "csv"]), Some(1));
    assert_eq!(code(&["enumerate", "--degrees", "/nonexistent/k.json"]), Some(1));
    assert_eq!(code(&["enumerate", "--degrees", s(&infeasible)]), Some(2));
    assert_eq!(code(&["enumerate", "--degrees", s(&k), "--cap", "89"]), Some(3));
    // switches never connect the two orientations, so the chain never mixes
    let out = degchain(&["mixing", "--degrees", s(&triangle), "--chain", "switch"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}
