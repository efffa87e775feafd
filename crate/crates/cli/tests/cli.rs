use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIRTH_DEATH: &str = "species X = 0\nspecies S = 0\n\nS -> X @ 5\n -> X @ 10\nX -> @ 1\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chemneuron"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn emit_prints_two_three_network() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["model", "emit", "--n", "2", "--m", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let net = chemneuron::dsl::parse_network(&text).unwrap();
    assert_eq!(net.species().len(), 15);
    assert_eq!(net.reactions().len(), 31);
}

#[test]
fn simulate_writes_trajectory_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bd.crn"), BIRTH_DEATH).unwrap();
    fs::write(dir.path().join("sched.csv"), "time,channel,count\n1.0,S,20\n").unwrap();
    let out = run(
        dir.path(),
        &["simulate", "bd.crn", "--schedule", "sched.csv", "--t-end", "5", "--dt", "0.5", "--out", "res"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("res/trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("time"));
    assert_eq!(lines.count(), 11);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("res/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 1);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bd.crn"), BIRTH_DEATH).unwrap();
    let csv = |name: &str| {
        let out = run(dir.path(), &["simulate", "bd.crn", "--t-end", "20", "--seed", "7", "--out", name]);
        assert_eq!(code(&out), 0);
        fs::read(dir.path().join(name).join("trajectory.csv")).unwrap()
    };
    assert_eq!(csv("a"), csv("b"));
}

#[test]
fn task_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("short.toml"), "transient = 10\nwindow = 10\n").unwrap();
    let args = |out: &'static str| ["--config", "short.toml", "tc", "--k", "2", "--replicates", "2", "--out", out];
    assert_eq!(code(&run(dir.path(), &args("a"))), 0);
    assert_eq!(code(&run(dir.path(), &args("b"))), 0);
    let a = fs::read_to_string(dir.path().join("a/weights.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("b/weights.csv")).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("channel,mean_H,normalized_H"));
    assert_eq!(a.lines().count(), 6);
}

#[test]
fn bad_arguments_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&run(dir.path(), &["simulate"])), 1);
    assert_eq!(code(&run(dir.path(), &["--help"])), 0);
}

#[test]
fn bad_config_exits_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "channels = 3\nbogus = 1\n").unwrap();
    let out = run(dir.path(), &["--config", "bad.toml", "fb", "--k", "2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.toml:2"));

    fs::write(dir.path().join("bad.crn"), "species X = 0\nX -> @ fast\n").unwrap();
    let out = run(dir.path(), &["simulate", "bad.crn", "--t-end", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.crn:2"));
}

#[test]
fn simulation_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bd.crn"), BIRTH_DEATH).unwrap();
    fs::write(dir.path().join("blocker"), "").unwrap();
    let out = run(dir.path(), &["simulate", "bd.crn", "--t-end", "1", "--out", "blocker/x"]);
    assert_eq!(code(&out), 3);
}
