//! The stored golden files must be reproduced byte for byte.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden")
}

#[test]
fn battery_artifacts_match_golden_files() {
    let out = Command::new(env!("CARGO_BIN_EXE_glinf"))
        .args(["battery", "--skip-verify", "--golden"])
        .arg(golden_dir())
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{v:#}");
    for (name, status) in v["golden"].as_object().unwrap() {
        assert_eq!(status, "match", "{name}");
    }
}

#[test]
fn regenerated_files_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_glinf"))
        .args(["battery", "--skip-verify", "--update", "--golden"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for name in ["calibration.json", "characters.json", "kr.json", "mlimit.json"] {
        let fresh = std::fs::read(tmp.path().join(name)).unwrap();
        let stored = std::fs::read(golden_dir().join(name)).unwrap();
        assert!(fresh == stored, "{name} differs from the stored copy");
    }
}

#[test]
fn frozen_convention_is_the_calibrated_one() {
    let text = std::fs::read_to_string(golden_dir().join("calibration.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["survivor"], "printed");
    assert_eq!(v["survivors"], serde_json::json!(["printed"]));
}
