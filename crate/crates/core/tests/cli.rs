//! Scripted runs of the `nullstellen` binary: exit codes, report contents
//! and replay from echoed inputs.

use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_nullstellen"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(TempDir::new().unwrap())
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn matrix(rows: &[&str]) -> String {
    let mut s = format!("{}\n", rows.len());
    for r in rows {
        let cells: Vec<String> = r.chars().map(String::from).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn encode_reports_canonical_text() {
    let f = Files::new();
    let one = f.put("one.txt", "1\n1\n");
    let r = run(&["encode", &one]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "1\n"));

    // Expanding the double sum with ω = -1 gives ¼(1 + x_0 - x_1 - x_0 x_1).
    let edge = f.put("edge.txt", &matrix(&["01", "00"]));
    let r = run(&["encode", &edge]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "1/4 - 1/4*x_1 + 1/4*x_0 - 1/4*x_0*x_1\n");

    let json_edge = f.put("edge.json", r#"{"adj": [[0, 1], [0, 0]]}"#);
    assert_eq!(run(&["encode", &json_edge]).stdout, r.stdout);

    let zero = f.put("zero.txt", &matrix(&["000", "000", "000"]));
    assert_eq!(run(&["encode", &zero]).stdout, "0\n");

    let bad = f.put("bad.txt", "2\n0 1\n0 0 1\n");
    let r = run(&["encode", &bad]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let bad = f.put("bool.txt", "2\n0 2\n0 0\n");
    assert_eq!(run(&["encode", &bad]).code, 2);
}

#[test]
fn primal_examples_and_exit_codes() {
    let f = Files::new();
    let edge = f.put("edge.txt", &matrix(&["01", "00"]));
    let rev = f.put("rev.txt", &matrix(&["00", "10"]));
    let empty = f.put("empty.txt", &matrix(&["00", "00"]));

    let r = run(&["primal", &edge, &edge]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["result"]["certificate"]["sigma"], json!([0, 1]));

    let r = run(&["primal", &empty, &edge]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["result"]["decision"], "none");

    let r = run(&["primal", &rev, &edge, "--check"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["result"]["certificate"]["sigma"], json!([1, 0]));
    assert_eq!(v["result"]["oracle"]["agrees"], true);

    let tri = f.put("tri.txt", &matrix(&["010", "001", "100"]));
    assert_eq!(run(&["primal", &tri, &edge]).code, 2);
    assert_eq!(run(&["primal", &tri, &tri, "--max-n-primal", "2"]).code, 2);
    assert_eq!(run(&["primal", &tri, &tri, "--max-n-primal", "0"]).code, 2);
    assert_eq!(run(&["primal", &edge, "/nonexistent/graph.txt"]).code, 2);
}

#[test]
fn dual_examples_and_exit_codes() {
    let f = Files::new();
    let edge = f.put("edge.txt", &matrix(&["01", "00"]));
    let ones = f.put("ones.txt", &matrix(&["11", "11"]));
    let empty = f.put("empty.txt", &matrix(&["00", "00"]));
    let loops = f.put("loops.txt", &matrix(&["10", "01"]));

    // A contains B and f_B ≡ 0: reported as a finding (exit 1).
    let r = run(&["dual", &ones, &edge]);
    let v = r.json();
    assert_eq!(v["result"]["family_size"], 3);
    assert_eq!(v["result"]["f_B_is_zero"], true);
    assert_eq!(v["result"]["oracle_contains"], true);
    assert_eq!(v["result"]["consistent"], false);
    assert_eq!(r.code, 1);

    // A avoids B: consistent.
    let r = run(&["dual", &loops, &edge, "--iso"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["result"]["consistent"], true);

    let r = run(&["dual", &ones, &empty]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["result"]["family_size"], 0);
    assert_eq!(r.json()["result"]["f_B_is_zero"], false);

    let five = f.put("five.txt", &matrix(&["00000"; 5]));
    let r = run(&["dual", &five, &five]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("dual vertex count"), "{}", r.stderr);
}

#[test]
fn profile_and_aut() {
    let f = Files::new();
    let edge = f.put("edge.txt", &matrix(&["01", "00"]));
    let empty = f.put("empty.txt", &matrix(&["000", "000", "000"]));
    let tri = f.put("tri.txt", &matrix(&["010", "001", "100"]));

    let v = run(&["profile", &tri, &empty]).json();
    assert_eq!(v["result"]["coset_count"], 1);
    let v = run(&["profile", &edge, &edge]).json();
    assert_eq!(v["result"]["coset_count"], 2);
    let r = run(&["profile", &tri, &tri]);
    assert_eq!(r.code, 0);
    let p = &r.json()["result"];
    assert_eq!(p["aut_order"].as_u64().unwrap() * p["coset_count"].as_u64().unwrap(), 6);
    assert!(r.json()["timing"]["elapsed_ms"].is_number());

    let v = run(&["aut", &tri, &empty]).json();
    assert_eq!(v["result"]["aut_order"], 6);
    assert_eq!(v["result"]["coset_reps"], json!([[0, 1, 2]]));
}

#[test]
fn galois_cn1_cn2() {
    let r = run(&["galois", "--r", "1,-1"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["result"]["s"], json!([0, 1]));
    assert_eq!(v["result"]["f_r_value"], "-2");
    assert_eq!(v["result"]["stabilizer_order"], 1);
    assert_eq!(run(&["galois", "--r", "1,1"]).code, 2);
    assert_eq!(run(&["galois", "--r", "0,1,3,4"]).code, 2);

    let f = Files::new();
    let poly = f.put("f.txt", "x_0*x_1 - 1\n");
    let sets = f.put("sets.txt", "0 1\n0 1\n");
    let r = run(&["cn2", &poly, "--t", "1,1", &sets]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["result"]["point"], json!(["0", "0"]));
    assert_eq!(run(&["cn2", &poly, "--t", "1,1", &sets, "--lason"]).code, 0);
    let small = f.put("small.txt", "0\n0 1\n");
    assert_eq!(run(&["cn2", &poly, "--t", "1,1", &small]).code, 2);

    let square = f.put("sq.txt", "x_0^2\n");
    let pm = f.put("pm.txt", "1, -1\n");
    let r = run(&["cn1", &square, &pm]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["result"]["remainder"], "1");
    assert_eq!(v["result"]["reconstruction_checked"], true);
}

#[test]
fn reports_replay_from_echoed_inputs() {
    let f = Files::new();
    let tri = f.put("tri.txt", &matrix(&["010", "001", "100"]));
    let path = f.put("path.txt", &matrix(&["010", "001", "000"]));
    let poly = f.put("f.txt", "order 3\nx_0*x_1 - w\n");
    let sets = f.put("sets.txt", "1 w\n1 w w^2\n");
    let commands: Vec<Vec<&str>> = vec![
        vec!["primal", &tri, &path, "--check"],
        vec!["dual", &tri, &path],
        vec!["profile", &tri, &path],
        vec!["aut", &tri, &path],
        vec!["galois", "--r", "0,1,3"],
        vec!["cn1", &poly, &sets],
        vec!["cn2", &poly, "--t", "1,1", &sets],
    ];
    for (k, args) in commands.iter().enumerate() {
        let report = f.path(&format!("report_{k}.json"));
        let report = report.to_str().unwrap();
        let mut with_out = args.clone();
        with_out.extend(["--out", report]);
        let first = run(&with_out);
        assert!(first.stdout.is_empty());
        let saved: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
        assert_eq!(saved["schema_version"], 1);
        assert_eq!(saved["command"], args[0]);
        assert_eq!(saved["exit_code"], first.code);

        let again = run(args);
        assert_eq!(strip_timing(again.json()), strip_timing(saved.clone()), "{args:?}");

        let replay = run(&["rerun", report]);
        assert_eq!(replay.code, 0, "{args:?}: {}", replay.stderr);
        let replayed = replay.json();
        assert_eq!(replayed["rerun"]["matches_previous"], true);
        assert_eq!(replayed["result"], saved["result"]);
    }
}

#[test]
fn rerun_flags_tampered_payloads() {
    let f = Files::new();
    let edge = f.put("edge.txt", &matrix(&["01", "00"]));
    let report = f.path("r.json");
    run(&["profile", &edge, &edge, "--out", report.to_str().unwrap()]);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    doc["result"]["coset_count"] = json!(7);
    std::fs::write(&report, doc.to_string()).unwrap();
    let r = run(&["rerun", report.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["rerun"]["matches_previous"], false);

    let junk = f.put("junk.json", "{}");
    assert_eq!(run(&["rerun", &junk]).code, 2);
}

#[test]
fn parallel_flag_does_not_change_reports() {
    let f = Files::new();
    let tri = f.put("tri.txt", &matrix(&["011", "001", "100"]));
    let path = f.put("path.txt", &matrix(&["010", "001", "000"]));
    for cmd in ["primal", "aut"] {
        let seq = strip_timing(run(&[cmd, &tri, &path]).json());
        let mut par = strip_timing(run(&[cmd, &tri, &path, "--parallel"]).json());
        par["inputs"]["config"]["parallel"] = json!(false);
        assert_eq!(seq, par);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).code, 2);
    assert_eq!(run(&["primal"]).code, 2);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("primal"));
}
