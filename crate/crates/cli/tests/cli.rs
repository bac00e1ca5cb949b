use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn monopole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monopole"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn classify_affine_level_one() {
    let out = monopole(&["classify", "--quiver", "affine-sl2", "--w", "1,0", "--v", "1,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["conical"], true);
    assert_eq!(j["good"], false);
    assert_eq!(j["level"], 1);
    assert_eq!(j["theorem_prediction"], "conical-not-good");
    assert_eq!(j["theory"]["class"], "ugly");
}

#[test]
fn classify_vprime_and_empty_box() {
    let out = monopole(&["classify", "--quiver", "a1", "--w", "2", "--v", "1", "--json"]);
    assert_eq!(json_of(&out)["good"], true);
    let out = monopole(&["classify", "--quiver", "a1", "--w", "2", "--v", "3", "--vprime", "3", "--json"]);
    let j = json_of(&out);
    assert_eq!(j["v_doubleprime"], serde_json::json!([0]));
    assert_eq!(j["conical"], true);
    assert_eq!(j["good"], true);
}

#[test]
fn hilbert_nilpotent_cone() {
    let out = monopole(&["hilbert", "--quiver", "a1", "--w", "2", "--v", "1", "--order", "8", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["coeffs"], serde_json::json!([1, 0, 3, 0, 5, 0, 7, 0, 9]));
    assert_eq!(j["classification"], "good");
    assert_eq!(j["min_degree"], 2);
    assert_eq!(j["witness"], serde_json::json!([1]));
}

#[test]
fn hilbert_refuses_bad_theory() {
    let out = monopole(&["hilbert", "--quiver", "a1", "--w", "2", "--v", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fmo_trivial_coweight() {
    let out = monopole(&["fmo", "--quiver", "a2", "--w", "1,1", "--v", "1,1", "--m", "0,0", "--f", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}

#[test]
fn fmo_json_shape() {
    let out = monopole(&["fmo", "--quiver", "a1", "--w", "2", "--v", "2", "--m", "1", "--sign", "-", "--json"]);
    let j = json_of(&out);
    assert_eq!(j["m"], serde_json::json!([1]));
    assert_eq!(j["dressing"], "1");
    assert_eq!(j["result"]["den"], "w[0,1] - w[0,2]");
}

#[test]
fn rejects_non_invariant_dressing() {
    let out = monopole(&["fmo", "--quiver", "a1", "--w", "2", "--v", "2", "--m", "0", "--f", "w[0,1]"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("swapping w[0,1] and w[0,2]"), "{err}");
}

#[test]
fn rejects_malformed_input() {
    for args in [
        &["fmo", "--quiver", "a1", "--w", "2", "--v", "2", "--m", "3"][..],
        &["fmo", "--quiver", "a1", "--w", "2,1", "--v", "2"],
        &["fmo", "--quiver", "nowhere", "--w", "2", "--v", "2"],
        &["fmo", "--quiver", "a1", "--w", "x", "--v", "2"],
        &["verify", "restriction", "--quiver", "a1", "--w", "1", "--v", "2", "--vprime", "0"],
    ] {
        assert_eq!(monopole(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_restriction_passes() {
    let out = monopole(&["verify", "restriction", "--quiver", "a1", "--w", "2", "--v", "2", "--vprime", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["all_hold"], true);
    let cases = j["cases"].as_array().unwrap();
    assert_eq!(cases.len(), j["checked"].as_u64().unwrap() as usize);
    assert!(cases.iter().all(|c| c["lhs"] == c["rhs"]));
}

#[test]
fn verify_subcommands_pass_on_a2() {
    for check in ["adding-defect", "involution", "d-identity", "km-embedding", "orientation"] {
        let out = monopole(&["verify", check, "--quiver", "a2", "--w", "1,1", "--v", "1,1", "--m", "1,1"]);
        assert_eq!(out.status.code(), Some(0), "{check}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn km_embedding_reports_stages() {
    let out = monopole(&[
        "verify", "km-embedding", "--quiver", "a1", "--w", "2", "--v", "2", "--vprime", "1", "--m", "1", "--sign", "+",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    let stages = j["cases"][0]["detail"]["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 5);
}

#[test]
fn quiver_file_matches_preset() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"vertices": ["a", "b"], "edges": [{{"source": "a", "target": "b"}}]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let args = |q: &'static str| ["hilbert", "--quiver", q, "--w", "1,1", "--v", "1,1", "--order", "6", "--json"];
    let from_file = monopole(&["hilbert", "--quiver", path, "--w", "1,1", "--v", "1,1", "--order", "6", "--json"]);
    let preset = monopole(&args("a2"));
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, preset.stdout);
}

#[test]
fn malformed_quiver_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"vertices": ["a"], "edges": [{{"source": "a", "target": "a"}}]}}"#).unwrap();
    let out = monopole(&["classify", "--quiver", file.path().to_str().unwrap(), "--w", "1", "--v", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["verify", "involution", "--quiver", "a2", "--w", "1,1", "--v", "2,1", "--json"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_monopole"))
            .args(args)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
