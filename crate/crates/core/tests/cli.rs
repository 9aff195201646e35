use std::path::Path;
use std::process::{Command, Output};

fn fpa(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpa"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("FPA_SEED")
        .output()
        .unwrap()
}

#[test]
fn simulate_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpa(&["simulate", "--seed", "3"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,value,competitor_bid,bid,won,payment,reward,gradient,mu_after,budget_after\n"));
    assert_eq!(csv.lines().count(), 201);
}

#[test]
fn experiment_with_config_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"knobs": [0.0, 20.0], "reps": 5}"#).unwrap();
    let out = fpa(
        &["experiment", "--kind", "2", "--svg", "--config", config.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("experiment_2.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "knob,T,K,mean_reward,stderr,benchmark,relative_error,policy");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0,200,5,"));
    let svg = std::fs::read_to_string(dir.path().join("experiment_2.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn env_seed_is_the_default_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed_env: Option<&str>, flag: Option<&str>, sub: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fpa"));
        cmd.arg("simulate").arg("--out").arg(dir.path().join(sub));
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        match seed_env {
            Some(s) => cmd.env("FPA_SEED", s),
            None => cmd.env_remove("FPA_SEED"),
        };
        assert!(cmd.status().unwrap().success());
        std::fs::read(dir.path().join(sub).join("trajectory.csv")).unwrap()
    };
    assert_eq!(run(Some("41"), None, "a"), run(None, Some("41"), "b"));
    assert_ne!(run(Some("41"), None, "c"), run(None, Some("42"), "d"));
    assert_eq!(run(Some("41"), Some("5"), "e"), run(None, Some("5"), "f"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"unknown_field": 1}"#).unwrap();
    let out = fpa(&["simulate", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = fpa(&["experiment", "--kind", "4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = fpa(&["simulate", "--config", "/nonexistent/x.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_fpa"))
        .args(["simulate", "--out"])
        .arg(dir.path())
        .env("FPA_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn benchmark_and_lowerbound_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpa(&["benchmark", "--seed", "1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("benchmarks.csv")).unwrap();
    assert!(csv.starts_with("instance_id,benchmark_kind,value,mu_star,slack\n"));
    assert_eq!(csv.lines().count(), 3);

    let out = fpa(&["lowerbound", "--prop", "1", "--horizon", "200", "--knob", "40", "--reps", "5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("lowerbound_1.json")).unwrap()).unwrap();
    assert_eq!(json["closed_form"], serde_json::json!([45.0, 25.0]));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = fpa(&["selftest"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
