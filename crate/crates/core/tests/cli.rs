use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn write(dir: &Path, name: &str, doc: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyloop")).args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        write(dir.path(), "square.json", &json!({"m": 4, "facets": [[1, 2], [2, 3], [3, 4], [1, 4]]}));
        write(dir.path(), "point.json", &json!({"m": 1, "facets": [[1]]}));
        write(dir.path(), "c5.json", &json!({"m": 5, "facets": [[1, 2], [2, 3], [3, 4], [4, 5], [1, 5]]}));
        write(dir.path(), "p3.json", &json!({"m": 3, "facets": [[1, 2], [2, 3]]}));
        write(dir.path(), "bad.json", &json!({"m": 4, "facets": [[1, 2, 3], [2, 4], [3, 4]]}));
        write(dir.path(), "ghost.json", &json!({"m": 3, "facets": [[1, 2]]}));
        Fixture { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }
}

#[test]
fn decompose_square() {
    let f = Fixture::new();
    let (code, doc) =
        run_json(&["decompose", "--input", &f.path("square.json"), "--pairs", "moment-angle", "--cutoff", "20"]);
    assert_eq!(code, 0);
    assert_eq!(doc["factors"], json!([{"kind": "loop_sphere", "dim": 3, "mult": 2}]));
    assert_eq!(doc["series"], json!({"num": [1], "den": [1, 0, -2, 0, 1]}));
    assert_eq!(doc["expansion"].as_array().unwrap().len(), 21);
    assert_eq!(doc["expansion"][20], 11);
    assert!(doc.get("trace").is_none());
}

#[test]
fn decompose_point() {
    let f = Fixture::new();
    let (code, doc) = run_json(&["decompose", "--input", &f.path("point.json"), "--pairs", "moment-angle"]);
    assert_eq!(code, 0);
    assert_eq!(doc["factors"], json!([]));
    assert_eq!(doc["series"], json!({"num": [1], "den": [1]}));
}

#[test]
fn decompose_c5_trace() {
    let f = Fixture::new();
    let (code, doc) = run_json(&["decompose", "--input", &f.path("c5.json"), "--pairs", "disks:3", "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(doc["trace"]["rule"], "pushout_full_subcomplex");
    assert!(doc["trace"]["children"].as_array().unwrap().len() >= 3);
}

#[test]
fn custom_pairs_and_output_file() {
    let f = Fixture::new();
    let pairs = write(f.dir.path(), "pairs.json", &json!({"suspensions": [[2], [2], [2]]}));
    let out = f.path("out.json");
    let spec = format!("custom:{}", pairs.display());
    let status = run(&["decompose", "--input", &f.path("p3.json"), "--pairs", &spec, "--output", &out]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let (_, reference) = run_json(&["decompose", "--input", &f.path("p3.json")]);
    assert_eq!(doc["series"], reference["series"]);

    let short = write(f.dir.path(), "short.json", &json!({"suspensions": [[2]]}));
    let spec = format!("custom:{}", short.display());
    let out = run(&["decompose", "--input", &f.path("p3.json"), "--pairs", &spec]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "PairMismatch");
}

#[test]
fn projective_preset() {
    let f = Fixture::new();
    let (code, doc) = run_json(&["decompose", "--input", &f.path("square.json"), "--pairs", "projective:inf"]);
    assert_eq!(code, 0);
    let factors = doc["factors"].as_array().unwrap();
    assert!(factors.contains(&json!({"kind": "sphere", "dim": 1, "mult": 4})));
    assert!(factors.contains(&json!({"kind": "loop_sphere", "dim": 3, "mult": 2})));
}

#[test]
fn verify_reports() {
    let f = Fixture::new();
    let (code, doc) = run_json(&["verify", "--input", &f.path("p3.json"), "--pairs", "moment-angle"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["engine_expansion"], doc["reference_expansion"]);

    let (code, doc) = run_json(&["verify", "--input", &f.path("square.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["reference_source"], "square_boundary_anchor");

    let (code, doc) = run_json(&["verify", "--linalg", "--random", "500", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["matrices"], 500);
}

#[test]
fn linalg_file() {
    let f = Fixture::new();
    let m = write(
        f.dir.path(),
        "m.json",
        &json!({"matrices": [[[1, 1], [0, 0]], [[0, 0], [0, 0]]], "vectors": [[2, 3], [4, 6]]}),
    );
    let (code, doc) = run_json(&["linalg", "--input", &m.to_string_lossy()]);
    assert_eq!(code, 0);
    assert_eq!(doc["splits"][0]["colBasis"], json!([[1, 0]]));
    assert_eq!(doc["splits"][0]["nullBasis"], json!([[1, -1]]));
    assert_eq!(doc["splits"][0]["determinant"], -1);
    assert_eq!(doc["bezout"][0]["coefficients"], json!([-1, 1]));
    assert_eq!(doc["bezout"][1]["gcd"], 2);

    let (code, doc) = run_json(&["verify", "--linalg", "--input", &m.to_string_lossy()]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);

    let bad = write(f.dir.path(), "bad_m.json", &json!({"matrices": [[[2, 0], [0, 1]]]}));
    let out = run(&["linalg", "--input", &bad.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let f = Fixture::new();
    assert_eq!(run(&["decompose", "--input", &f.path("bad.json")]).status.code(), Some(2));
    assert_eq!(run(&["check", "--input", &f.path("bad.json")]).status.code(), Some(2));
    assert_eq!(run(&["check", "--input", &f.path("square.json")]).status.code(), Some(0));
    assert_eq!(run(&["decompose", "--input", &f.path("ghost.json")]).status.code(), Some(1));
    assert_eq!(run(&["decompose", "--input", &f.path("missing.json")]).status.code(), Some(1));
    assert_eq!(run(&["decompose", "--input", &f.path("square.json"), "--cutoff", "0"]).status.code(), Some(1));
    assert_eq!(run(&["decompose", "--input", &f.path("square.json"), "--pairs", "disks:1"]).status.code(), Some(1));
    assert_eq!(run(&["decompose", "--input", &f.path("p3.json"), "--vertex", "2"]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let f = Fixture::new();
    let (c5, square) = (f.path("c5.json"), f.path("square.json"));
    for args in [
        vec!["decompose", "--input", &c5, "--trace"],
        vec!["verify", "--input", &square],
        vec!["verify", "--linalg", "--random", "40"],
        vec!["check", "--input", &c5],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn check_document() {
    let f = Fixture::new();
    let (_, doc) = run_json(&["check", "--input", &f.path("c5.json")]);
    assert_eq!(doc["classification"]["flag"], true);
    assert_eq!(doc["classification"]["chordal_1_skeleton"], false);
    assert_eq!(doc["admissible"], true);
    assert_eq!(doc["vertices"][0]["neighbors"], json!([2, 5]));
}
