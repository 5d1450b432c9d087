use std::process::{Command, Output};

use serde_json::Value;

fn snowflake(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snowflake"))
        .args(args)
        .env_remove("SNOWFLAKE_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn word_ball_of_radius_two_has_seventeen_lines() {
    let out = snowflake(&["word-ball", "--r", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 17);
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["schema"], "1");
    assert_eq!(first["row"]["d"], 0);
}

#[test]
fn repr_distance_example() {
    let doc = json(&snowflake(&[
        "repr-distance",
        "--p",
        "2",
        "--epsilon",
        "0.5",
        "--x",
        "0,0,0",
        "--y",
        "0,0,1",
    ]));
    let d = doc["result"]["distance"].as_f64().unwrap();
    let expected = 0.5f64.sqrt() * std::f64::consts::TAU.powf(0.25);
    assert!((d - expected).abs() < 1e-6, "{d}");
    assert!(doc["result"]["abs_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(doc["config"]["p"], 2.0);
    assert_eq!(doc["complete"], true);
}

#[test]
fn measure_ratio_example() {
    let doc = json(&snowflake(&[
        "measure-ratio",
        "--epsilon",
        "0.5",
        "--samples",
        "1000000",
        "--seed",
        "7",
    ]));
    let ratio = doc["result"]["ratio"].as_f64().unwrap();
    assert!((ratio - 256.0).abs() <= 25.6, "{ratio}");
    assert!(doc["result"]["std_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(snowflake(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        snowflake(&["repr-distance", "--x", "0,0,0", "--y", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        snowflake(&["--p", "1.5", "ball-volume"]).status.code(),
        Some(2)
    );
    let budget = snowflake(&["ln-inequality", "--n", "3", "--budget", "100"]);
    assert_eq!(budget.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&budget.stdout).unwrap();
    assert_eq!(doc["complete"], false);
    assert!(doc["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn help_describes_each_command() {
    for cmd in [
        "ball-volume",
        "word-ball",
        "xn",
        "kernel-norm",
        "repr-distance",
        "distance-matrix",
        "distortion",
        "doubling",
        "measure-ratio",
        "sweep-epsilon",
        "ln-inequality",
        "schrodinger-check",
        "growth",
    ] {
        let out = snowflake(&[cmd, "--help"]);
        assert!(out.status.success(), "{cmd}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.lines().next().unwrap().len() > 20, "{cmd}: {text}");
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_snowflake"))
        .args(["growth", "--r", "10", "--format", "csv"])
        .env("SNOWFLAKE_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("growth.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {\"schema\":\"1\""));
    assert_eq!(lines.next(), Some("r,size"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn explicit_output_wins_over_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested").join("vol.json");
    let out = Command::new(env!("CARGO_BIN_EXE_snowflake"))
        .args(["ball-volume", "--output", target.to_str().unwrap()])
        .env("SNOWFLAKE_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["result"]["n"], 2);
    assert!(!dir.path().join("ball-volume.json").exists());
}
