use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supergeom")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn constants_for_two_one() {
    let out = run(&["constants", "--n", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["basis"].as_array().unwrap().len(), 8);
    let c = v["c"].as_array().unwrap();
    let c573 = c.iter().find(|e| e["index"] == serde_json::json!([5, 7, 3])).unwrap();
    assert_eq!(c573["value"], "1/2");
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn classical_constants() {
    let out = run(&["constants", "--n", "2", "--m", "0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("tensor,i,j,k,value\n"));
    assert!(text.lines().any(|l| l.starts_with("killing,")));
}

#[test]
fn equal_blocks_are_rejected() {
    for cmd in ["constants", "verify", "cohomology", "flat"] {
        let out = run(&[cmd, "--n", "2", "--m", "2"]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("equal block sizes"));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["constants", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--n", "2", "--m", "1", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--n", "1", "--m", "0"]).status.code(), Some(2));
}

#[test]
fn cohomology_matches_oracle() {
    for m in ["1", "0"] {
        let out = run(&["cohomology", "--n", "2", "--m", m, "--max-degree", "3"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["betti"], serde_json::json!([1, 0, 0, 1]));
        assert_eq!(v["matches_oracle"], true);
        assert_eq!(v["degrees"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn cap_produces_partial_report() {
    let out = run(&["cohomology", "--n", "2", "--m", "1", "--max-degree", "3", "--degree-cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["partial"], true);
    assert_eq!(v["betti"], serde_json::json!([1, 0]));

    let out = run(&["verify", "--n", "2", "--m", "0", "--degree-cap", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["partial"], true);
    assert_eq!(v["passed"], true);
}

#[test]
fn flat_experiments() {
    let out = run(&["flat", "--n", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["theta"], "flat");
    assert_eq!(v["scaled_2x"], "nonflat");
    assert_eq!(v["conjugated"], "flat");
    let counts: Vec<u64> =
        v["experiments"].as_array().unwrap().iter().map(|e| e["nonzero_coefficients"].as_u64().unwrap()).collect();
    assert_eq!(counts[0], 0);
    assert!(counts[1] > 0);
    assert_eq!(counts[2], 0);
}

#[test]
fn verify_writes_output_file_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["verify", "--n", "2", "--m", "0", "--seed", "5", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let v: Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    assert!(v["config"]["build"].as_str().is_some_and(|s| !s.is_empty()));
    let suites: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(
        suites,
        [
            "structure_identities",
            "commutation_factor",
            "cartan_relations",
            "dual_route_differential",
            "canonical_theta",
            "symplectic",
            "bundles"
        ]
    );
}

#[test]
fn other_seeds_also_pass() {
    let a = json(&run(&["verify", "--n", "2", "--m", "0", "--seed", "1"]));
    let b = json(&run(&["verify", "--n", "2", "--m", "0", "--seed", "2"]));
    assert_eq!(a["passed"], true);
    assert_eq!(b["passed"], true);
    assert_ne!(a["config"], b["config"]);
}
