use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qmink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmink")).args(args).output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn product_of_caps_echoes_config() {
    let out = qmink(&[
        "product",
        "--a",
        r#"{"type":"cap","center":[1,0,0,0],"t":0.5}"#,
        "--b",
        r#"{"type":"cap","center":[0,1,0,0],"t":0.25}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["config"]["command"], "product");
    assert_eq!(v["config"]["a"]["type"], "cap");
    let exact = &v["result"]["exact"];
    assert_eq!(exact["type"], "cap");
    assert!((exact["t"].as_f64().unwrap() - 0.75).abs() < 1e-15);
    assert_eq!(exact["center"], serde_json::json!([0.0, 1.0, 0.0, 0.0]));
}

#[test]
fn product_reaching_half_turn_is_full() {
    let out = qmink(&[
        "product",
        "--a",
        r#"{"type":"cap","center":[1,0,0,0],"t":2.0}"#,
        "--b",
        r#"{"type":"cap","center":[1,0,0,0],"t":1.5}"#,
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["result"]["exact"]["type"], "full");
    assert_eq!(v["result"]["notes"], serde_json::json!(["FULL_SPHERE"]));
}

#[test]
fn product_from_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let a = r#"{"type":"arc","axis":[0,1,0],"phi":0.1,"delta":0.4}"#;
    let b = r#"{"type":"arc","axis":[0,0,1],"phi":-0.2,"delta":0.3}"#;
    let file = dir.path().join("ops.json");
    fs::write(&file, format!(r#"{{"a":{a},"b":{b}}}"#)).unwrap();
    let out_file = dir.path().join("res.json");
    let from_file = qmink(&["product", "--file", path_str(&file), "--out", path_str(&out_file)]);
    assert_eq!(from_file.status.code(), Some(0));
    let written: Value = serde_json::from_str(&fs::read_to_string(&out_file).unwrap()).unwrap();
    let from_flags = json_stdout(&qmink(&["product", "--a", a, "--b", b]));
    assert_eq!(written["result"], from_flags["result"]);
    let notes = written["result"]["notes"].as_array().unwrap();
    assert!(notes.contains(&Value::from("CORNER_MINIMUM")));
    assert!(notes.contains(&Value::from("EMBEDDED")));
}

#[test]
fn presets_resolve() {
    for (preset, note) in [("example1", "GRID_MINIMUM"), ("example3", "BOUND_ONLY"), ("example5", "BOUND_ONLY")] {
        let v = json_stdout(&qmink(&["product", "--preset", preset]));
        assert_eq!(v["config"]["preset"], preset);
        let notes = v["result"]["notes"].as_array().unwrap();
        assert!(notes.contains(&Value::from(note)), "{preset}: {notes:?}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qmink(&["product"]).status.code(), Some(2));
    assert_eq!(qmink(&["product", "--a", "{}", "--b", "{}"]).status.code(), Some(2));
    assert_eq!(qmink(&["frobnicate"]).status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_qmink"))
        .args(["product", "--preset", "example1"])
        .env("QMINK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn thread_count_is_echoed() {
    let out = Command::new(env!("CARGO_BIN_EXE_qmink"))
        .args(["product", "--preset", "example5"])
        .env("QMINK_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(json_stdout(&out)["config"]["threads"], 3);
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("report.json");
    let out = qmink(&["verify", "arc-same-axis", "--n", "500", "--seed", "7", "--out", path_str(&out_file)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_file).unwrap()).unwrap();
    let report = &v["report"];
    assert_eq!(report["property"], "ARC_SAME_AXIS");
    assert_eq!(report["passed"], true);
    assert_eq!(report["violations"], 0);
    assert_eq!(report["seed"], 7);
    assert_eq!(v["config"]["n"], 500);
}

#[test]
fn verify_flags_override_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    fs::write(&params, r#"{"s": 0.3, "t": 0.4}"#).unwrap();
    let v = json_stdout(&qmink(&["verify", "CAP_CLOSURE", "--n", "300", "--params", path_str(&params), "--t", "0.9"]));
    assert_eq!(v["report"]["params"]["s"], 0.3);
    assert_eq!(v["report"]["params"]["t"], 0.9);
}

#[test]
fn verify_negative_angles_parse() {
    let out = qmink(&["verify", "ARC_SAME_AXIS", "--n", "200", "--phi1", "-0.4", "--phi2", "-1.1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_is_deterministic() {
    let run = || {
        let mut v = json_stdout(&qmink(&["verify", "AXISCAP_BOUND", "--n", "2000", "--seed", "11"]));
        v["report"].as_object_mut().unwrap().remove("runtime_s");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn export_is_deterministic_and_projects() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    for p in [&p1, &p2] {
        let out = qmink(&["export", "--preset", "example3", "--method", "stereo", "--n", "1000", "--out", path_str(p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = fs::read_to_string(&p1).unwrap();
    assert_eq!(text, fs::read_to_string(&p2).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,z,a_s,b_u,b_v");
    assert_eq!(lines.count(), 1000);
}

#[test]
fn export_ply_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cloud.ply");
    let v = json_stdout(&qmink(&["export", "--preset", "example5", "--n", "64", "--out", path_str(&p)]));
    assert_eq!(v["config"]["format"], "ply");
    let bytes = fs::read(&p).unwrap();
    assert!(bytes.starts_with(b"ply\n"));
    assert!(String::from_utf8_lossy(&bytes).contains("element vertex 64"));
}

#[test]
fn project_reads_s3_cloud() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    fs::write(&input, "w,x,y,z\n1,0,0,0\n0,1,0,0\n0.5,0.5,0.5,0.5\n").unwrap();
    let output = dir.path().join("out.csv");
    let out = qmink(&["project", "--input", path_str(&input), "--method", "stereo", "--out", path_str(&output)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&output).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0], vec![0.0, 0.0, 0.0]);
    assert_eq!(rows[1], vec![1.0, 0.0, 0.0]);
    for c in &rows[2] {
        assert!((c - 0.5 / 1.5).abs() < 1e-15);
    }
}

#[test]
fn project_rejects_r3_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    fs::write(&input, "x,y,z\n0,0,0\n").unwrap();
    let out = qmink(&["project", "--input", path_str(&input), "--out", path_str(&dir.path().join("o.csv"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_is_io_error() {
    let out = qmink(&["project", "--input", "/nonexistent/in.csv", "--out", "/tmp/unused.csv"]);
    assert_eq!(out.status.code(), Some(4));
}
