//! End-to-end tests driving the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU64, Ordering};

static STAMP: AtomicU64 = AtomicU64::new(0);

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "hatlab-cli-test-{}-{}",
        std::process::id(),
        STAMP.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &std::path::Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn hatlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hatlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const G52: &str = r#"{"prisoners": 5, "colors": {"kind": "mod", "n": 2},
    "visibility": "complete", "innings": [1, 2, 2, 2, 2]}"#;
const G22: &str = r#"{"prisoners": 2, "colors": {"kind": "mod", "n": 2},
    "visibility": "complete", "innings": [1, 1]}"#;
const G23: &str = r#"{"prisoners": 2, "colors": {"kind": "mod", "n": 3},
    "visibility": "complete", "innings": [1, 1]}"#;
const OMEGA: &str = r#"{"prisoners": "omega", "colors": {"kind": "int"},
    "visibility": {"default": "complete"}, "innings": {"default": 1}}"#;

#[test]
fn validate_accepts_and_normalizes() {
    let dir = scratch_dir();
    let game = write(&dir, "g52.json", G52);
    let out = hatlab(&["validate", game.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["prisoners"], 5);
    assert_eq!(value["innings"][0], 1);
}

#[test]
fn validate_rejects_loops_with_exit_2() {
    let dir = scratch_dir();
    let game = write(
        &dir,
        "bad.json",
        r#"{"prisoners": 3, "colors": {"kind": "mod", "n": 2},
            "visibility": [[1], [1], [0]], "innings": [1, 1, 1]}"#,
    );
    let out = hatlab(&["validate", game.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("visibility"),
        "diagnostic names the problem: {err}"
    );
}

#[test]
fn conditions_profile_of_g52() {
    let dir = scratch_dir();
    let game = write(&dir, "g52.json", G52);
    let out = hatlab(&["conditions", game.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["s1"], true);
    assert_eq!(v["s2"], true);
    assert_eq!(v["s3"], false);
}

#[test]
fn run_hint_sum_guess_record() {
    let dir = scratch_dir();
    let game = write(&dir, "g52.json", G52);
    let out = hatlab(&[
        "run",
        game.to_str().unwrap(),
        "--predictor",
        "hint-sum",
        "--coloring",
        "1,0,1,1,0",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["guesses"], serde_json::json!([0, 0, 1, 1, 0]));
    assert_eq!(v["match"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["errors"], serde_json::json!([0]));
}

#[test]
fn run_fep_on_omega_support() {
    let dir = scratch_dir();
    let game = write(&dir, "omega.json", OMEGA);
    let out = hatlab(&[
        "run",
        game.to_str().unwrap(),
        "--predictor",
        "fep-zero",
        "--coloring",
        "2=5",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["errors"], serde_json::json!([2]));
    assert_eq!(v["match"]["all_except"], serde_json::json!([2]));
}

#[test]
fn evaluate_g52_hint_sum() {
    let dir = scratch_dir();
    let game = write(&dir, "g52.json", G52);
    let out = hatlab(&[
        "evaluate",
        game.to_str().unwrap(),
        "--predictor",
        "hint-sum",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["max_errors"], 1);
    assert_eq!(v["colorings"], 32);
    assert_eq!(v["total_correct"], 144);
}

#[test]
fn evaluate_outputs_are_byte_identical() {
    let dir = scratch_dir();
    let game = write(&dir, "g52.json", G52);
    let path = game.to_str().unwrap();
    let first = hatlab(&["evaluate", path, "--predictor", "hint-sum"]);
    let second = hatlab(&["evaluate", path, "--predictor", "hint-sum"]);
    let threaded = hatlab(&[
        "evaluate",
        path,
        "--predictor",
        "hint-sum",
        "--threads",
        "7",
    ]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, threaded.stdout);
}

#[test]
fn sampling_requires_a_seed() {
    let dir = scratch_dir();
    let game = write(&dir, "g52.json", G52);
    let out = hatlab(&[
        "evaluate",
        game.to_str().unwrap(),
        "--predictor",
        "hint-sum",
        "--sample",
        "10",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn search_unsat_exits_1() {
    let dir = scratch_dir();
    let game = write(&dir, "g23.json", G23);
    let out = hatlab(&[
        "search",
        game.to_str().unwrap(),
        "--goal",
        "correct>=1",
        "--budget",
        "1e6",
    ]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "UNSAT");
}

#[test]
fn search_sat_certificate_replays_through_evaluate() {
    let dir = scratch_dir();
    let game = write(&dir, "g22.json", G22);
    let path = game.to_str().unwrap();
    let out = hatlab(&["search", path, "--goal", "correct>=1", "--budget", "1e6"]);
    assert_eq!(code(&out), 0);
    let cert = write(&dir, "cert.json", &stdout(&out));

    let replay = hatlab(&["evaluate", path, "--tables", cert.to_str().unwrap()]);
    assert_eq!(code(&replay), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&replay)).unwrap();
    assert!(v["min_correct"].as_u64().unwrap() >= 1);
}

#[test]
fn replay_flag_round_trips_and_detects_drift() {
    let dir = scratch_dir();
    let game = write(&dir, "g22.json", G22);
    let path = game.to_str().unwrap();
    let out = hatlab(&["search", path, "--goal", "correct>=1", "--budget", "1e6"]);
    let saved = write(&dir, "saved.json", &stdout(&out));

    let same = hatlab(&[
        "search",
        path,
        "--goal",
        "correct>=1",
        "--budget",
        "1e6",
        "--replay",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(code(&same), 0);

    let tampered = write(&dir, "tampered.json", &stdout(&out).replace("SAT", "OFF"));
    let diff = hatlab(&[
        "search",
        path,
        "--goal",
        "correct>=1",
        "--budget",
        "1e6",
        "--replay",
        tampered.to_str().unwrap(),
    ]);
    assert_eq!(code(&diff), 1);
}

#[test]
fn bad_goal_is_a_usage_error() {
    let dir = scratch_dir();
    let game = write(&dir, "g22.json", G22);
    let out = hatlab(&[
        "search",
        game.to_str().unwrap(),
        "--goal",
        "correct==1",
        "--budget",
        "100",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn theorem_f2vcyclic_small() {
    let out = hatlab(&["theorem", "f2vcyclic", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["instances"], 4);
    assert_eq!(v["consistent"], 4);
}

#[test]
fn theorem_average_needs_seed() {
    let out = hatlab(&["theorem", "average", "--count", "5"]);
    assert_eq!(code(&out), 2);
    let out = hatlab(&["theorem", "average", "--count", "5", "--seed", "0"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn hunt_emits_json_lines() {
    let out = hatlab(&[
        "hunt",
        "--sizes",
        "2",
        "--colors",
        "mod2",
        "--in-count",
        "1",
        "--goal",
        "correct>=1",
        "--budget",
        "1e6",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().any(|r| r["verdict"] == "SAT"));
    assert!(rows.iter().any(|r| r["verdict"] == "UNSAT"));
}

#[test]
fn run_cycle_parity_autodetects_a_cycle() {
    let dir = scratch_dir();
    let game = write(&dir, "g22.json", G22);
    let out = hatlab(&[
        "run",
        game.to_str().unwrap(),
        "--predictor",
        "cycle-parity",
        "--coloring",
        "0,0",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["match"], serde_json::json!([0]));
}
