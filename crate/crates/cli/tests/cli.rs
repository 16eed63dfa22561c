use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trineqkd")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn probs_tables() {
    let out = run(&["probs", "--epsilon", "1"]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        assert_eq!(line[2..].split(',').collect::<Vec<_>>(), vec!["0.111111"; 3]);
    }
    let text = stdout(&run(&["probs", "--epsilon", "0.3"]));
    assert_eq!(text.lines().nth(1).unwrap(), "A,0.0333333,0.15,0.15");
    let text = stdout(&run(&["probs", "--epsilon", "0"]));
    assert_eq!(text.lines().nth(2).unwrap(), "B,0.166667,0,0.166667");
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["simulate", "--rounds", "0"][..],
        &["verify", "--epsilon", "1.5"],
        &["curves", "--grid", "0:0.1"],
        &["curves", "--grid", "0:0.1:0"],
        &["thresholds", "--case", "qutrit"],
        &["bogus"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_noiseless_is_error_free() {
    let out = run(&["simulate", "--epsilon", "0", "--rounds", "1000", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value = |name: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("{name},"))).unwrap();
        line.split(',').nth(1).unwrap().parse().unwrap()
    };
    assert_eq!(value("trit_key_errors"), 0.0);
    assert_eq!(value("bit_key_errors"), 0.0);
    assert!((value("p_trit") - 0.25).abs() < 0.05);
}

#[test]
fn simulate_is_deterministic_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let args = |d: &str| {
        vec!["simulate", "--epsilon", "0.1", "--rounds", "2000", "--seed", "9", "--out", d]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    let o1 = Command::new(env!("CARGO_BIN_EXE_trineqkd")).args(args(d1.to_str().unwrap())).output().unwrap();
    let o2 = Command::new(env!("CARGO_BIN_EXE_trineqkd")).args(args(d2.to_str().unwrap())).output().unwrap();
    assert!(o1.status.success());
    assert_eq!(o1.stdout, o2.stdout);
    for name in
        ["record.csv", "alice_bits.txt", "bob_bits.txt", "alice_trits.txt", "bob_trits.txt", "announcements.jsonl"]
    {
        assert_eq!(fs::read(d1.join(name)).unwrap(), fs::read(d2.join(name)).unwrap(), "{name}");
    }
    let record = fs::read_to_string(d1.join("record.csv")).unwrap();
    assert_eq!(record.lines().next().unwrap(), "slot,alice,bob");
    assert_eq!(record.lines().count(), 2001);
    let first = fs::read_to_string(d1.join("announcements.jsonl")).unwrap();
    assert!(first.lines().next().unwrap().starts_with("{\"slots\":["));
}

#[test]
fn curves_files_and_monotone_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["curves", "--grid", "0:0.25:0.05", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for case in ["bit", "trit"] {
        let text = fs::read_to_string(dir.path().join(format!("curves_{case}.csv"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "epsilon,i_key,chi_alice,chi_bob,c_star_alice,c_star_bob");
        let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
        assert_eq!(rows.len(), 6);
        assert_eq!(&rows[0][2..4], &[0.0, 0.0]);
        for w in rows.windows(2) {
            assert!(w[1][1] < w[0][1]);
            assert!(w[1][2] >= w[0][2] && w[1][3] >= w[0][3]);
        }
    }
    let rates = fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    assert_eq!(rates.lines().nth(1).unwrap(), "0,1,1.58496,0.57312,0.584963");
}

#[test]
fn thresholds_single_and_csv() {
    let out = run(&["thresholds", "--case", "trit", "--side", "bob"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let eps = v["results"][0]["epsilon_star"].as_f64().unwrap();
    assert!((eps - 0.150).abs() < 0.003);
    assert_eq!(v["joint_bound"]["side"], "bob");

    let out = run(&["thresholds", "--case", "bit", "--side", "alice", "--format", "csv"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "case,side,epsilon_star,info,c_star");
    assert!(text.lines().nth(1).unwrap().starts_with("bit,alice,0.19"));
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--rff-samples", "100", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.contains("100 Haar rotations"));
}
