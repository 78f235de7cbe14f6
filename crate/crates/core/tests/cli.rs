use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matroidal"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), value)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const VERONESE_4_2: &str = "n=4\nx1 x2\nx1 x3\nx1 x4\nx2 x3\nx2 x4\nx3 x4\n";
const BLOCKS_22: &str = "n=4\nx1 x3\nx1 x4\nx2 x3\nx2 x4\n";

#[test]
fn check_reports_witness_and_exit_code() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.txt", VERONESE_4_2);
    let bad = write(&dir, "bad.txt", "n=4\nx1 x2\nx3 x4\n");
    let (code, v) = json(&["check", s(&good)]);
    assert_eq!(code, 0);
    assert_eq!(v["matroidal"], true);
    let (code, v) = json(&["check", s(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(v["matroidal"], false);
    assert_eq!(v["violation"]["b1"], "x1*x2");
    assert_eq!(v["violation"]["b2"], "x3*x4");
    assert_eq!(v["violation"]["x"], 1);
}

#[test]
fn analyze_fields() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.txt", BLOCKS_22);
    let (code, v) = json(&["analyze", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["n"], 4);
    assert_eq!(v["d"], 2);
    assert_eq!(v["q"], 2);
    assert_eq!(v["pd"], 2);
    assert_eq!(v["depth"], 1);
    assert_eq!(v["height"], 2);
    assert_eq!(v["cohen_macaulay"], false);
}

#[test]
fn decompose_and_partition() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.txt", BLOCKS_22);
    let (code, v) = json(&["decompose", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["primes"], serde_json::json!([[1, 2], [3, 4]]));
    assert_eq!(v["height"], 2);
    assert_eq!(v["unmixed"], true);
    assert_eq!(v["signature"], serde_json::json!([2, 2]));

    let mixed = write(&dir, "m.txt", "n=3\nx1 x3\nx2 x3\n");
    let (code, v) = json(&["decompose", s(&mixed)]);
    assert_eq!(code, 0);
    assert_eq!(v["unmixed"], false);
    assert_eq!(v["signature"], serde_json::json!([2, 1]));

    let (code, v) = json(&["partition", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["parts"], serde_json::json!([[1, 2], [3, 4]]));
    let cubic = write(&dir, "c.txt", "n=3\nx1 x2 x3\n");
    assert_eq!(json(&["partition", s(&cubic)]).0, 1);
    let (code, v) = json(&["decompose", s(&cubic)]);
    assert_eq!(code, 0);
    assert!(v.get("signature").is_none());
}

#[test]
fn cert_round_trip_through_verify() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "v.txt", VERONESE_4_2);
    let out = run(&["--json", "cert", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verified_sv"], true);
    assert_eq!(cert["sums"], serde_json::json!(["x1*x2", "x1*x3+x2*x3", "x1*x4+x2*x4+x3*x4"]));
    let c = dir.path().join("cert.json");
    std::fs::write(&c, &out.stdout).unwrap();

    let (code, v) = json(&["verify-cert", s(&f), s(&c)]);
    assert_eq!(code, 0);
    assert_eq!(v["verified_sv"], true);
    let (code, v) = json(&["verify-cert", s(&f), s(&c), "--oracle", "--cap", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["oracle_checked"], true);

    // tampering with a layer breaks condition (iii) and the sums check
    let mut bad = cert.clone();
    bad["layers"] = serde_json::json!([["x1*x2"], ["x1*x3", "x3*x4"], ["x1*x4", "x2*x3", "x2*x4"]]);
    bad["sums"] = serde_json::json!(["x1*x2", "x1*x3+x3*x4", "x1*x4+x2*x3+x2*x4"]);
    let b = write(&dir, "bad.json", &bad.to_string());
    assert_eq!(json(&["verify-cert", s(&f), s(&b)]).0, 1);
}

#[test]
fn product_cert_is_inconclusive_without_oracle() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.txt", BLOCKS_22);
    let out = run(&["--json", "cert", s(&f), "--construction", "product"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["layers"], serde_json::json!([]));
    assert_eq!(cert["sums"].as_array().unwrap().len(), 3);
    let c = dir.path().join("p.json");
    std::fs::write(&c, &out.stdout).unwrap();
    assert_eq!(json(&["verify-cert", s(&f), s(&c)]).0, 2);
    let (code, v) = json(&["verify-cert", s(&f), s(&c), "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["oracle_checked"], true);
}

#[test]
fn construction_selection() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.txt", BLOCKS_22);
    assert_eq!(json(&["cert", s(&f), "--construction", "veronese"]).0, 1);
    let (code, v) = json(&["cert", s(&f), "--construction", "degree2"]);
    assert_eq!(code, 0);
    assert_eq!(v["layers"].as_array().unwrap().len(), 3);
    let v42 = write(&dir, "v.txt", VERONESE_4_2);
    assert_eq!(json(&["cert", s(&v42), "--construction", "search", "--size", "2"]).0, 2);
    let (code, v) = json(&["cert", s(&v42), "--construction", "search"]);
    assert_eq!(code, 0);
    assert_eq!(v["verified_sv"], true);
}

#[test]
fn enumerate_and_scan() {
    let (code, v) = json(&["enumerate", "--n", "3", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 4);
    let (_, v) = json(&["enumerate", "--n", "4", "--d", "2", "--sym"]);
    assert_eq!(v["count"], 4);
    let (code, v) = json(&["scan", "--n", "5", "--d", "2", "--budget", "10000"]);
    assert_eq!(code, 0);
    assert_eq!(v["total_ideals"], 6);
    assert_eq!(v["certified_by_construction"], 6);
    assert_eq!(v["reverify_failures"], 0);
}

#[test]
fn usage_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["enumerate", "--n", "3"]).status.code(), Some(3));
    assert_eq!(run(&["check", "/nonexistent/ideal.txt"]).status.code(), Some(3));
    let garbage = write(&dir, "g.txt", "x1 x2\n");
    assert_eq!(run(&["check", s(&garbage)]).status.code(), Some(3));
    assert_eq!(run(&["enumerate", "--n", "8", "--d", "4"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn text_output_is_readable() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "v.txt", VERONESE_4_2);
    let out = run(&["analyze", s(&f)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("cohen_macaulay = true"));
    assert!(text.contains("height = 3"));
}
