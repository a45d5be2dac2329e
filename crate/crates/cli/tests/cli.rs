use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_returnset")).args(args).output().expect("binary runs")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn tuples(v: &Value) -> Vec<(u64, u64)> {
    v.as_array().unwrap().iter().map(|t| (t[0].as_u64().unwrap(), t[1].as_u64().unwrap())).collect()
}

#[test]
fn line_counterexample_table() {
    let o = run(&["counterexample", "--which", "line"]);
    assert!(o.status.success());
    let v = json_out(&o);
    assert_eq!(v["box"], serde_json::json!([200, 200]));
    assert_eq!(v["condition_polynomial_agrees"], Value::Bool(true));
    let mut want = Vec::new();
    for k in 0..=8u64 {
        want.push((3 * k * k, 3 * (k * k + k) / 2));
        want.push((3 * k * k, 3 * (k * k - k) / 2));
    }
    want.retain(|&(m, n)| m <= 200 && n <= 200);
    want.sort();
    want.dedup();
    assert_eq!(tuples(&v["solutions"]), want);
}

#[test]
fn noninvertible_counterexample_by_alias() {
    let o = run(&["counterexample", "--which", "6.2", "--box", "100"]);
    assert!(o.status.success());
    let v = json_out(&o);
    assert_eq!(v["instance"], "noninvertible");
    assert_eq!(tuples(&v["solutions"]), vec![(0, 0), (6, 6), (18, 6), (36, 24), (60, 24), (90, 54)]);
    assert_eq!(v["gap_coordinate"], 1);
}

#[test]
fn solve_diagonal_fixture() {
    let o = run(&["solve", fixture("diag.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["certificate"], "exact");
    let offsets: Vec<Value> = v["cells"].as_array().unwrap().iter().map(|c| c["offset"].clone()).collect();
    assert_eq!(offsets, vec![serde_json::json!([0, 1]), serde_json::json!([2, 0])]);
}

#[test]
fn verify_accepts_the_solution_and_rejects_a_corruption() {
    let problem = fixture("diag.json");
    let solved = run(&["solve", problem.to_str().unwrap()]);
    let good = scratch("good_answer.json", std::str::from_utf8(&solved.stdout).unwrap());
    let o = run(&["verify", problem.to_str().unwrap(), "--answer", good.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)["ok"], Value::Bool(true));

    let bad = scratch("bad_answer.json", r#"{"rank": 2, "cells": [{"offset": [0, 1], "basis": []}, {"offset": [1, 0], "basis": []}]}"#);
    let o = run(&["verify", problem.to_str().unwrap(), "--answer", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_out(&o);
    assert_eq!(v["ok"], Value::Bool(false));
    assert_eq!(v["missed"], serde_json::json!([2, 0]));
    assert_eq!(v["spurious"], serde_json::json!([1, 0]));
}

#[test]
fn malformed_inputs_exit_two() {
    let broken = scratch("broken.json", "{\"J\": [[[1, 0],");
    let o = run(&["solve", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let missing = scratch("missing.json", r#"{"J": [[[1]]], "v0": [1]}"#);
    assert_eq!(run(&["solve", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/nonexistent/problem.json"]).status.code(), Some(2));
    assert_eq!(run(&["counterexample", "--which", "line", "--box", "0"]).status.code(), Some(2));
}

#[test]
fn hilbert_and_padic_fixtures() {
    let o = run(&["hilbert", fixture("hilbert.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)["hilbert_basis"], serde_json::json!([[0, 2], [1, 1], [2, 0]]));
    let o = run(&["padic-demo", fixture("padic.json").to_str().unwrap()]);
    assert!(o.status.success());
    let v = json_out(&o);
    assert_eq!(v["report"]["exact"], Value::Bool(true));
    assert_eq!(v["report"]["log_side"], "tied_at_precision");
}

#[test]
fn output_is_deterministic() {
    let args = ["counterexample", "--which", "noninvertible", "--box", "60"];
    let a = run(&args);
    let b = run(&args);
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "17"]);
    let c = run(&seeded);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let p = fixture("diag.json");
    assert_eq!(run(&["solve", p.to_str().unwrap()]).stdout, run(&["solve", p.to_str().unwrap()]).stdout);
}

#[test]
fn enumerate_writes_to_a_file() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("enumerated.json");
    let o = run(&["enumerate", fixture("diag.json").to_str().unwrap(), "--box", "5", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["tuples"], serde_json::json!([[0, 1], [2, 0]]));
}
