use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rainbow_core::{ecg, EdgeColouredGraph};
use serde_json::Value;
use tempfile::TempDir;

fn rainbow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow")).args(args).current_dir(dir).output().expect("spawn rainbow")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn rainbow_complete(n: usize) -> EdgeColouredGraph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, (u * n + v) as u32)));
    EdgeColouredGraph::new(n, edges).unwrap()
}

fn write_graph(dir: &TempDir, name: &str, g: &EdgeColouredGraph) {
    fs::write(dir.path().join(name), ecg::write(g)).unwrap();
}

#[test]
fn solve_rainbow_k9() {
    let dir = TempDir::new().unwrap();
    write_graph(&dir, "k9.ecg", &rainbow_complete(9));

    let out = rainbow(dir.path(), &["solve", "--input", "k9.ecg", "--k", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v["k"], 2);
    assert_eq!(v["verified"], true);
    assert_eq!(v["matching"].as_array().unwrap().len(), 2);

    let out = rainbow(dir.path(), &["solve", "--input", "k9.ecg", "--k", "3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("18 < 25"), "{}", stderr(&out));
}

#[test]
fn solve_writes_trace_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let gen = rainbow(
        dir.path(),
        &["gen", "--model", "min_colour_degree", "--n", "13", "--k", "3", "--seed", "7", "--out", "g.ecg"],
    );
    assert_eq!(code(&gen), 0);
    let out = rainbow(dir.path(), &["solve", "--input", "g.ecg", "--k", "3", "--trace", "t.jsonl", "--out", "m.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let trace = fs::read_to_string(dir.path().join("t.jsonl")).unwrap();
    assert!(!trace.is_empty());
    for line in trace.lines() {
        let record: Value = serde_json::from_str(line).unwrap();
        assert!(record["params"].is_array());
        assert!(record["action"].is_string());
    }
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "g.ecg", "--matching", "m.json"])), 0);
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "g.ecg", "--matching", "m.json", "--k", "4"])), 5);
}

#[test]
fn solve_bipartite_with_exact_epsilon() {
    let dir = TempDir::new().unwrap();
    let gen =
        rainbow(dir.path(), &["gen", "--model", "bipartite", "--n", "12", "--k", "2", "--seed", "3", "--out", "b.ecg"]);
    assert_eq!(code(&gen), 0);
    let out = rainbow(dir.path(), &["solve", "--input", "b.ecg", "--k", "2", "--bipartite", "--epsilon", "1/2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = rainbow(dir.path(), &["solve", "--input", "b.ecg", "--k", "2", "--bipartite", "--epsilon", "3/4"]);
    assert_eq!(code(&out), 2);
    let out = rainbow(dir.path(), &["solve", "--input", "b.ecg", "--k", "2", "--bipartite", "--epsilon", "0.5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn malformed_input_exits_1() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.ecg"), "ecg 1\n3 1\n0 0 1\n").unwrap();
    assert_eq!(code(&rainbow(dir.path(), &["solve", "--input", "bad.ecg", "--k", "1"])), 1);
    assert_eq!(code(&rainbow(dir.path(), &["solve", "--input", "missing.ecg", "--k", "1"])), 1);
    assert_eq!(code(&rainbow(dir.path(), &["frobnicate"])), 1);
}

#[test]
fn json_graph_input() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c4.json"), r#"{"n": 4, "edges": [[0,1,0],[1,2,1],[2,3,2],[3,0,3]]}"#).unwrap();
    let out = rainbow(dir.path(), &["oracle", "--input", "c4.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["size"], 2);
}

#[test]
fn decompose_sharpness_instance() {
    let dir = TempDir::new().unwrap();
    let gen = rainbow(dir.path(), &["gen", "--model", "sharpness", "--t", "11", "--n", "12", "--out", "k12.ecg"]);
    assert_eq!(code(&gen), 0);
    let g = ecg::parse(&fs::read_to_string(dir.path().join("k12.ecg")).unwrap()).unwrap();
    assert_eq!(g.edge_count(), 66);
    assert_eq!(g.colours().len(), 1);

    let out = rainbow(dir.path(), &["decompose", "--input", "k12.ecg", "--t", "11", "--out", "d.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let d: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    let parts = d["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 66);
    assert!(parts.iter().all(|p| p.as_array().unwrap().len() == 1));
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "k12.ecg", "--parts", "d.json"])), 0);

    assert_eq!(code(&rainbow(dir.path(), &["decompose", "--input", "k12.ecg", "--t", "10"])), 2);
}

#[test]
fn decompose_random_and_tampered() {
    let dir = TempDir::new().unwrap();
    let gen = rainbow(
        dir.path(),
        &["gen", "--model", "mono_budget", "--n", "30", "--t", "11", "--colours", "2", "--seed", "5", "--out", "g.ecg"],
    );
    assert_eq!(code(&gen), 0);
    let out = rainbow(dir.path(), &["decompose", "--input", "g.ecg", "--t", "11", "--out", "d.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "g.ecg", "--parts", "d.json"])), 0);

    let mut d: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    let parts = d["parts"].as_array_mut().unwrap();
    let donor = parts.iter().position(|p| !p.as_array().unwrap().is_empty()).unwrap();
    let edge = parts[donor][0].clone();
    let target = (donor + 1) % parts.len();
    parts[target].as_array_mut().unwrap().push(edge);
    fs::write(dir.path().join("bad.json"), d.to_string()).unwrap();
    let out = rainbow(dir.path(), &["verify", "--input", "g.ecg", "--parts", "bad.json"]);
    assert_eq!(code(&out), 5);
    assert!(!stderr(&out).is_empty());
}

#[test]
fn decompose_keep_completion_verifies_against_completion() {
    let dir = TempDir::new().unwrap();
    let gen = rainbow(
        dir.path(),
        &["gen", "--model", "mono_budget", "--n", "14", "--t", "11", "--seed", "2", "--out", "g.ecg"],
    );
    assert_eq!(code(&gen), 0);
    let out =
        rainbow(dir.path(), &["decompose", "--input", "g.ecg", "--t", "11", "--keep-completion", "--out", "d.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let ok = rainbow(dir.path(), &["verify", "--input", "g.ecg", "--parts", "d.json", "--completed"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "g.ecg", "--parts", "d.json"])), 5);
}

#[test]
fn hall_failure_exits_4_with_certificate() {
    let dir = TempDir::new().unwrap();
    let g = EdgeColouredGraph::new(6, [(0, 1, 1), (2, 3, 1), (4, 5, 1)]).unwrap();
    write_graph(&dir, "g.ecg", &g);
    let out = rainbow(dir.path(), &["decompose", "--input", "g.ecg", "--t", "1"]);
    assert_eq!(code(&out), 4);
    let cert = &stdout_json(&out)["hall_failure"];
    let edges = cert["edges"].as_array().unwrap().len() as u64;
    assert!(cert["neighbourhood"].as_u64().unwrap() < edges);
}

#[test]
fn short_matching_fails_verification() {
    let dir = TempDir::new().unwrap();
    write_graph(&dir, "k9.ecg", &rainbow_complete(9));
    fs::write(dir.path().join("m.json"), "[[0,1,1],[2,3,21]]").unwrap();
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "k9.ecg", "--matching", "m.json", "--k", "2"])), 0);
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "k9.ecg", "--matching", "m.json", "--k", "3"])), 5);
    fs::write(dir.path().join("wrong.json"), "[[0,1,7]]").unwrap();
    assert_eq!(code(&rainbow(dir.path(), &["verify", "--input", "k9.ecg", "--matching", "wrong.json", "--k", "1"])), 5);
}

#[test]
fn gen_is_deterministic_and_checks_parity() {
    let dir = TempDir::new().unwrap();
    let args = ["gen", "--model", "min_colour_degree", "--n", "13", "--k", "3", "--seed", "7"];
    let a = rainbow(dir.path(), &args);
    let b = rainbow(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let g = ecg::parse(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert!(g.min_colour_degree().unwrap() >= 3);

    fs::write(dir.path().join("spec.json"), r#"{"model":"min_colour_degree","n":13,"k":3,"seed":7}"#).unwrap();
    let c = rainbow(dir.path(), &["gen", "--spec", "spec.json"]);
    assert_eq!(code(&c), 0, "{}", stderr(&c));
    assert_eq!(c.stdout, b.stdout);

    assert_eq!(code(&rainbow(dir.path(), &["gen", "--model", "sharpness", "--t", "3", "--n", "5"])), 2);
    assert_eq!(code(&rainbow(dir.path(), &["gen", "--model", "min_colour_degree", "--n", "5"])), 2);
}

#[test]
fn check_suites() {
    let dir = TempDir::new().unwrap();
    let out = rainbow(dir.path(), &["check", "--suite", "T3", "--trials", "200", "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let lines: Vec<Value> =
        String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 200);
    assert!(lines.iter().all(|r| r["outcome"] == "verified"));
    assert!(stderr(&out).contains("verified=200"));

    assert_eq!(code(&rainbow(dir.path(), &["check", "--suite", "adapters"])), 0);
    let empty = rainbow(dir.path(), &["check", "--suite", "T1", "--trials", "0"]);
    assert_eq!(code(&empty), 0);
    assert!(empty.stdout.is_empty());
    assert!(stderr(&empty).contains("verified=0 failed=0"));
}

#[test]
fn check_output_is_independent_of_job_count() {
    let dir = TempDir::new().unwrap();
    let strip = |out: Output| -> Vec<Value> {
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|l| {
                let mut v: Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("elapsed_ms");
                v
            })
            .collect()
    };
    let one = rainbow(dir.path(), &["check", "--suite", "T1", "--trials", "30", "--seed", "4", "--jobs", "1"]);
    let many = rainbow(dir.path(), &["check", "--suite", "T1", "--trials", "30", "--seed", "4", "--jobs", "4"]);
    assert_eq!(strip(one), strip(many));
}
