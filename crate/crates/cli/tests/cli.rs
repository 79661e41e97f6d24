use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn crown(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crown")).args(args).output().expect("binary runs")
}

fn crown_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_crown"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn fano_has_no_crown() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano.l3g");
    let p = path.to_str().unwrap();
    assert_eq!(crown(&["construct", "--kind", "fano", "-o", p]).status.code(), Some(0));
    let o = crown(&["crown", "find", "--graph", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "NONE\n");
}

#[test]
fn sts9_crown_from_stdin() {
    let sts = stdout(&crown(&["construct", "--kind", "sts9"]));
    let o = crown_stdin(&["crown", "find", "--graph", "-"], &sts);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    let j = json(&crown_stdin(&["--format", "json", "crown", "find", "--graph", "-"], &sts));
    assert_eq!(j["crown"]["jewels"].as_array().unwrap().len(), 3);
}

#[test]
fn catalog_verify_lists_five_classes() {
    let o = crown(&["catalog", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&crown(&["--format", "json", "catalog", "verify"]));
    assert_eq!(j["classes"], 5);
    assert_eq!(j["unmatched"], 0);
    assert_eq!(j["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn catalog_show_is_case_insensitive() {
    let o = crown(&["catalog", "show", "g3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count(), 9);
    assert_eq!(crown(&["catalog", "show", "G9"]).status.code(), Some(2));
}

#[test]
fn search_json_schema_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("result.json");
    let o = crown(&[
        "search", "ex", "--n", "9", "--exact", "--budget-nodes", "1e8", "--threads", "4", "--out",
        out.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for key in ["n", "best", "exact", "nodes", "seconds", "witness"] {
        assert!(j.get(key).is_some(), "missing {key}");
    }
    assert_eq!(j["best"], 9);
    assert_eq!(j["exact"], true);
    let witness: crown_core::LinearThreeGraph = j["witness"].as_str().unwrap().parse().unwrap();
    assert_eq!(witness.edge_count(), 9);
    assert_eq!(json(&o)["best"], 9);
}

#[test]
fn restricted_search_and_audit_of_witness() {
    let o = crown(&["--format", "json", "search", "ex", "--n", "11", "--exact", "--restricted", "thm2"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert!(j["best"].as_u64().unwrap() >= 12);
    let witness = j["witness"].as_str().unwrap();
    let a = crown_stdin(&["--format", "json", "audit", "--graph", "-", "--reduce"], witness);
    assert_eq!(a.status.code(), Some(0));
    let r = json(&a);
    assert_eq!(r["conclusion_ok"], true);
    for key in ["y", "z1", "z2", "z3", "e1", "e2", "chain", "hypotheses_ok"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn audit_requires_min_degree_two() {
    let g = "5 2\n0 1 2\n0 3 4\n";
    assert_eq!(crown_stdin(&["audit", "--graph", "-"], g).status.code(), Some(1));
}

#[test]
fn g6_verify_and_critical_scan() {
    let o = crown(&["g6", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("PASS\n"));
    let host = stdout(&crown(&["construct", "--kind", "minimal-host", "--name", "G6"]));
    let j = json(&crown_stdin(&["--format", "json", "critical", "scan", "--graph", "-"], &host));
    assert_eq!(j.as_array().unwrap().len(), 1);
    assert_eq!(j[0]["incident"].as_array().unwrap().len(), 8);
    let l = json(&crown_stdin(&["--format", "json", "link", "show", "--graph", "-", "--edge", "0,1,2"], &host));
    assert_eq!(l["degree_vector"], serde_json::json!([4, 4, 3]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(crown(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(crown(&["catalog", "verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(crown(&["search", "ex", "--n", "70"]).status.code(), Some(2));
    assert_eq!(crown(&["construct", "--kind", "random", "--n", "10"]).status.code(), Some(2));
    let g = stdout(&crown(&["construct", "--kind", "fano"]));
    assert_eq!(crown_stdin(&["link", "show", "--graph", "-", "--edge", "0,1"], &g).status.code(), Some(2));
}

#[test]
fn seeded_output_is_reproducible() {
    let args = ["--seed", "9", "construct", "--kind", "random", "--n", "20", "--min-degree", "4"];
    let (a, b) = (crown(&args), crown(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let g = ["--format", "json", "g6", "verify"];
    assert_eq!(crown(&g).stdout, crown(&g).stdout);
}

#[test]
fn verify_all_passes() {
    let o = crown(&["verify", "all", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 8);
}
