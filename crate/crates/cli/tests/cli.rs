use std::process::{Command, Output};

fn qgames(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgames")).args(args).output().expect("spawn qgames")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn clone_qubit_one_to_two() {
    let out = qgames(&["clone", "--d", "2", "--n", "1", "--m", "2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "clone");
    assert_eq!(v["global_value"], 0.666666666667);
    assert_eq!(v["single_value"], 0.833333333333);
    assert_eq!(v["asym_bound"], 1.66666666667);
    assert_eq!(v["consistent"], true);
    assert!(v["error"].is_null());
}

#[test]
fn estimate_single_copy() {
    let out = qgames(&["estimate", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mean_fidelity"], 0.666666666667);
    assert_eq!(v["theoretical"], 0.666666666667);
}

#[test]
fn solve_default_is_rock_paper_scissors() {
    let out = qgames(&["solve"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["value"].as_f64().unwrap().abs() < 1e-9);
    for key in ["x", "y"] {
        for p in v[key].as_array().unwrap() {
            assert_eq!(p.as_f64().unwrap(), 0.333333333333);
        }
    }
}

#[test]
fn solve_custom_matrix() {
    let out = qgames(&["solve", "--matrix", "1,-1;-1,1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["rows"].as_u64(), v["cols"].as_u64()), (Some(2), Some(2)));
    assert!(v["value"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qgames(&["clone", "--m", "1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(qgames(&["clone", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(qgames(&["mc-play", "--game", "cloning"]).status.code(), Some(2));
    assert_eq!(qgames(&["solve", "--matrix", "1,2;3"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_carry_a_kind() {
    let out = qgames(&["clone", "--d", "9", "--n", "3", "--m", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["command"], "clone");
    assert_eq!(v["error"]["kind"], "size_cap_exceeded");
    assert!(v["error"]["message"].as_str().unwrap().contains("4096"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let runs = [
        vec!["mc-play", "--game", "cloning", "--samples", "2000", "--seed", "11"],
        vec!["mc-play", "--game", "estimation", "--n", "2", "--m", "1", "--samples", "2000", "--seed", "11"],
        vec!["asym-bound", "--samples", "50", "--grid", "5", "--seed", "4"],
        vec!["sandwich", "--game", "cloning", "--levels", "3,6", "--seed", "2"],
    ];
    for args in runs {
        let a = qgames(&args);
        let b = qgames(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn mc_play_reports_z_score() {
    let out = qgames(&["mc-play", "--game", "one-particle", "--samples", "5000", "--seed", "5"]);
    let v = json(&out);
    assert_eq!(v["exact_payoff"], 0.833333333333);
    assert!(v["z"].as_f64().unwrap().is_finite());
    assert_eq!(v["samples"], 5000);
}

#[test]
fn csv_to_file() {
    let dir = std::env::temp_dir().join(format!("qgames-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("clone.csv");
    let out = qgames(&["clone", "--m", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let header = rows.headers().unwrap().clone();
    assert!(header.iter().any(|h| h == "global_value"));
    assert_eq!(rows.records().count(), 1);
    std::fs::remove_dir_all(&dir).ok();
}
