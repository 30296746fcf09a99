//! End-to-end runs of the binary against the bundled fixture documents.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")).join(name)
}

fn cylrig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylrig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn check_on_f1_ci() {
    let out = cylrig(&["check", "--input", fixture("f1_ci.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["tight"], true);
    assert_eq!(v["gamma_tight"]["tight"], true);
    assert_eq!(v["characters"]["necessary"]["pass"], true);
    assert_eq!(v["seed"], 0);
}

#[test]
fn every_bundled_base_graph_passes_check() {
    for name in [
        "f1_ci.json",
        "f2_crossed_ci.json",
        "k4_c2.json",
        "w5_c2.json",
        "wd42_c2.json",
        "f2_parallel_c2.json",
        "f2_cs.json",
        "w5_cs.json",
        "wd42_cs.json",
        "f1_nofix_cs.json",
        "f1_twofix_cs.json",
        "k34_cs.json",
    ] {
        let out = cylrig(&["check", "--input", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json_of(&out);
        assert_eq!(v["gamma_tight"]["tight"], true, "{name}");
    }
}

#[test]
fn certify_k5_reports_not_tight_with_full_witness() {
    let out = cylrig(&["certify", "--input", fixture("k5_cs.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0)); // a negative verdict is still a verdict
    let v = json_of(&out);
    assert_eq!(v["not_tight"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 5);
}

#[test]
fn isostatic_on_wd42_c2_at_seed_zero() {
    let out = cylrig(&[
        "isostatic",
        "--input",
        fixture("wd42_c2.json").to_str().unwrap(),
        "--seed",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["isostatic"], true);
    assert_eq!(v["max_rank"], 19); // 3·7 − 2
}

#[test]
fn certify_replay_roundtrip_via_files() {
    let out = cylrig(&[
        "certify",
        "--input",
        fixture("f2_parallel_c2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["verified"], true);
    let cert = serde_json::to_string(&v["certificate"]).unwrap();
    let dir = std::env::temp_dir();
    let cert_path = dir.join("cylrig_test_cert.json");
    std::fs::write(&cert_path, cert).unwrap();
    let out2 = cylrig(&[
        "replay",
        "--input",
        cert_path.to_str().unwrap(),
        "--target",
        fixture("f2_parallel_c2.json").to_str().unwrap(),
    ]);
    assert_eq!(out2.status.code(), Some(0));
    let v2 = json_of(&out2);
    assert_eq!(v2["verified"], true);
    assert_eq!(v2["graph"]["vertices"].as_array().unwrap().len(), 8);
}

#[test]
fn trees_on_base_graphs() {
    for name in ["k4_c2.json", "f1_ci.json", "k34_cs.json"] {
        let out = cylrig(&["trees", "--input", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json_of(&out);
        assert_eq!(v["verified"], true, "{name}");
    }
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = std::env::temp_dir();
    let path = dir.join("cylrig_broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = cylrig(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("input error"));
}

#[test]
fn missing_generator_is_an_input_error() {
    let dir = std::env::temp_dir();
    let path = dir.join("cylrig_nogen.json");
    std::fs::write(
        &path,
        r#"{"group":"Ci","vertices":["a","b"],"edges":[],"action":{}}"#,
    )
    .unwrap();
    let out = cylrig(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inv"));
}

#[test]
fn broken_automorphism_names_the_edge() {
    let dir = std::env::temp_dir();
    let path = dir.join("cylrig_nonauto.json");
    std::fs::write(
        &path,
        r#"{
            "group": "Ci",
            "vertices": ["a", "b", "c", "d"],
            "edges": [["a", "b"], ["c", "d"], ["a", "c"]],
            "action": {"inv": {"a": "b", "b": "a", "c": "d", "d": "c"}}
        }"#,
    )
    .unwrap();
    let out = cylrig(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("automorphism"), "stderr: {err}");
}

#[test]
fn certify_on_c2v_is_unsupported_with_pointer_to_characters() {
    let out = cylrig(&[
        "certify",
        "--input",
        fixture("square_c2v.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("necessary conditions only"), "stderr: {err}");
}

#[test]
fn basegraphs_dumps_verified_catalog() {
    let out = cylrig(&["basegraphs"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 12);
    assert!(entries.iter().all(|e| e["verified"] == true));
}

#[test]
fn reports_echo_the_seed_for_replayability() {
    let out = cylrig(&[
        "isostatic",
        "--input",
        fixture("w5_c2.json").to_str().unwrap(),
        "--seed",
        "42",
        "--retries",
        "2",
    ]);
    let v = json_of(&out);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["retries"], 2);
}
