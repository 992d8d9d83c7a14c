use std::process::{Command, Output};

use serde_json::Value;

fn glinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glinf")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn direct_character_of_the_smallest_cyclic_point() {
    let out = glinf(&["char", "--n", "2", "--a", "0,2", "--b", "0,1", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["method"], "direct");
    assert_eq!(v["agreement"], true);
    assert_eq!(v["series"]["coeffs"], serde_json::json!([1, 1, 3, 5, 10]));
    assert_eq!(v["params"]["p_prime"], 4);
    assert_eq!(v["params"]["p"], 3);
}

#[test]
fn heads_with_levels_match_full_entries() {
    let full = glinf(&["char", "--n", "2", "--a", "0,2", "--b", "0,1", "--degree", "5"]);
    let heads = glinf(&["char", "--a", "0", "--b", "0", "--pprime", "4", "--p", "3", "--degree", "5"]);
    assert_eq!(full.stdout, heads.stdout);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = ["compare", "--n", "3", "--a", "1,0,1", "--b", "1,0,0", "--method", "direct,recursion", "--N", "2,1,1"];
    assert_eq!(glinf(&args).stdout, glinf(&args).stdout);
}

#[test]
fn recursion_outside_its_region_is_rejected() {
    let out = glinf(&["char", "--n", "2", "--a", "0,2", "--b", "0,1", "--method", "recursion", "--N", "5,0"]);
    assert_eq!(out.status.code(), Some(2));
    let line = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["error"]["exit_code"], 2);
}

#[test]
fn recursion_requires_finitization() {
    let out = glinf(&["char", "--n", "2", "--a", "0,2", "--b", "0,1", "--method", "recursion"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_method_and_bad_seeds_are_config_errors() {
    assert_eq!(glinf(&["char", "--a", "0", "--b", "0", "--method", "fermionic"]).status.code(), Some(2));
    assert_eq!(glinf(&["verify", "--seeds", "2,4,5,7,11"]).status.code(), Some(2));
    assert_eq!(glinf(&["verify", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn direct_and_recursion_agree() {
    let out = glinf(&["compare", "--n", "2", "--a", "0,2", "--b", "0,1", "--method", "direct,recursion", "--N", "3,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["identical"], true);
}

#[test]
fn kr_and_direct_agree() {
    let out = glinf(&["compare", "--k", "2", "--r", "3", "--a", "1,2", "--method", "kr,direct"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bosonic_with_a_wrong_convention_reports_the_diff() {
    let args = ["compare", "--n", "2", "--a", "1,1", "--b", "0,1", "--method", "direct,bosonic", "--degree", "6"];
    let right = glinf(&[&args[..], &["--convention", "printed"]].concat());
    assert_eq!(right.status.code(), Some(0));
    let wrong = glinf(&[&args[..], &["--convention", "swapped"]].concat());
    assert_eq!(wrong.status.code(), Some(1));
    let v = json(&wrong);
    assert_eq!(v["identical"], false);
    assert_eq!(v["first_diff"], 3);
}

#[test]
fn csv_is_a_degree_table() {
    let out = glinf(&["char", "--a", "0", "--b", "0", "--degree", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "degree,coefficient\n0,1\n1,1\n2,3\n");
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 2\na = [0, 2]\nb = [0, 1]\ndegree = 3\nformat = \"csv\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = glinf(&["char", "--config", cfg]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "degree,coefficient\n0,1\n1,1\n2,3\n3,5\n");
    // flags win
    let out = glinf(&["char", "--config", cfg, "--degree", "1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "degree,coefficient\n0,1\n1,1\n");
    std::fs::write(dir.path().join("bad.toml"), "degre = 3\n").unwrap();
    let out = glinf(&["char", "--config", dir.path().join("bad.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub/char.json");
    let out = glinf(&["char", "--a", "0", "--b", "0", "--degree", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["reference"], "mlimit");
    assert_eq!(v["agreement"], true);
}

#[test]
fn relations_on_fock_defaults_pass() {
    let out = glinf(&["verify", "--suite", "relations", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn tameness_fails_on_the_full_shifted_product() {
    let out = glinf(&["verify", "--suite", "tame", "--space", "shifted", "--a", "0", "--b", "0", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = json(&out)["reports"][0]["witness"]["message"].as_str().unwrap().to_string();
    assert!(msg.contains("[∅, (2,2)]") && msg.contains("[(1), (2,1)]"), "{msg}");
}

#[test]
fn lemch2_suite_passes_on_one_point() {
    let out = glinf(&["verify", "--suite", "lemch2", "--n", "2", "--a", "0,2", "--b", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["lemch2"]["status"], "pass");
}

#[test]
fn iota_transport_succeeds() {
    let out = glinf(&["iso", "--map", "iota", "--n", "2", "--r", "3", "--a", "2,1", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["runs"][0]["edges_checked"].as_u64().unwrap() > 0);
}
