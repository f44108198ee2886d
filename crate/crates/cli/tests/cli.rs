use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn graph_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphlet-gibbs"))
        .args(args)
        .env_remove("GRAPHLET_GIBBS_SEED")
        .output()
        .unwrap()
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const P4: &str = "4 3\n0 1\n1 2\n2 3\n";

#[test]
fn seeded_runs_replay_byte_for_byte() {
    let g = graph_file(P4);
    let args = [
        "sample-rooted",
        "--graph",
        path(&g),
        "--root",
        "1",
        "--lambda",
        "1/5",
        "--colors",
        "2",
        "--samples",
        "200",
        "--seed",
        "42",
    ];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout.iter().filter(|&&c| c == b'\n').count(), 200);
}

#[test]
fn worker_count_does_not_change_output() {
    let g = graph_file(K4);
    let base = [
        "sample-polymer",
        "--graph",
        path(&g),
        "--lambda",
        "1/20",
        "--colors",
        "2",
        "--samples",
        "300",
        "--seed",
        "5",
    ];
    let one = cli(&[&base[..], &["--jobs", "1"]].concat());
    let three = cli(&[&base[..], &["--jobs", "3"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn seed_from_environment() {
    let g = graph_file(P4);
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_graphlet-gibbs"))
            .args([
                "sample-unrooted",
                "--graph",
                path(&g),
                "--lambda",
                "1/10",
                "--samples",
                "20",
            ])
            .env("GRAPHLET_GIBBS_SEED", "9")
            .output()
            .unwrap()
    };
    assert_eq!(run().stdout, run().stdout);
    assert!(String::from_utf8(run().stderr).unwrap().contains("seed=9"));
}

#[test]
fn records_are_json_lines() {
    let g = graph_file(K4);
    let out = cli(&[
        "sample-potts",
        "--graph",
        path(&g),
        "--colors",
        "2",
        "--beta",
        "3/2",
        "--alpha",
        "2",
        "--samples",
        "5",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for line in String::from_utf8(out.stdout).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["size"], 4);
        assert!(v["ground"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn at_threshold_is_refused_with_exit_2() {
    let g = graph_file(K4);
    let out = cli(&[
        "sample-rooted",
        "--graph",
        path(&g),
        "--root",
        "0",
        "--lambda",
        "1/4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("1/4"));
}

#[test]
fn check_reports_and_sets_exit_code() {
    let g = graph_file(K4);
    let pass = cli(&[
        "check",
        "--graph",
        path(&g),
        "--model",
        "potts",
        "--colors",
        "2",
        "--beta",
        "3/2",
        "--alpha",
        "2",
    ]);
    assert_eq!(pass.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&pass.stdout).unwrap();
    assert_eq!(v["pass"], true);

    let fail = cli(&[
        "check",
        "--graph",
        path(&g),
        "--model",
        "uniform",
        "--lambda",
        "1/4",
    ]);
    assert_eq!(fail.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&fail.stdout).unwrap();
    assert_eq!(v["below_threshold"], false);
}

#[test]
fn bad_input_exits_1() {
    let g = graph_file("3 5\n0 1\n");
    assert_eq!(
        cli(&["sample-unrooted", "--graph", path(&g), "--lambda", "1/10"])
            .status
            .code(),
        Some(1)
    );
    let g = graph_file(P4);
    assert_eq!(
        cli(&[
            "sample-rooted",
            "--graph",
            path(&g),
            "--root",
            "7",
            "--lambda",
            "1/10"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        cli(&[
            "sample-rooted",
            "--graph",
            path(&g),
            "--root",
            "0",
            "--lambda",
            "x"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        cli(&[
            "sample-rooted",
            "--graph",
            "/nonexistent/graph",
            "--root",
            "0",
            "--lambda",
            "1/10"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(cli(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn hardcore_needs_a_bipartition() {
    let g = graph_file("4 4\n0 2\n2 1\n1 3\n3 0\n");
    let out = cli(&["sample-hardcore", "--graph", path(&g), "--lambda", "1/10"]);
    assert_eq!(out.status.code(), Some(1));
    let g = graph_file("4 4\n0 2\n2 1\n1 3\n3 0\nbipartition 2\n");
    let out = cli(&[
        "sample-hardcore",
        "--graph",
        path(&g),
        "--lambda",
        "1/10",
        "--samples",
        "10",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn subtree_suite_passes() {
    let out = cli(&["verify", "--suite", "subtrees"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = String::from_utf8(out.stdout).unwrap();
    assert!(lines.lines().count() > 10);
}

#[test]
fn estimate_z_prints_json() {
    let g = graph_file("1 0\n");
    let out = cli(&[
        "estimate-z",
        "--graph",
        path(&g),
        "--root",
        "0",
        "--lambda",
        "1/10",
        "--eps",
        "0.5",
        "--delta",
        "0.5",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["estimate"].as_f64().unwrap() - 1.1).abs() < 1e-12);
}
