//! Drives the built binary end to end: exit codes, file sets, and
//! byte-level determinism.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use swissrank_core::synth::synthetic_tournament;
use swissrank_core::{write_results, write_roster};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_swissrank"));
    c.env_remove("SWISSRANK_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Writes a medium synthetic tournament and returns (results, roster).
fn fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let t = synthetic_tournament(16, 7, 42);
    let results = dir.join("results.csv");
    let roster = dir.join("roster.csv");
    fs::write(&results, write_results(&t)).unwrap();
    fs::write(&roster, write_roster(&t)).unwrap();
    (results, roster)
}

fn file_names(dir: &Path) -> BTreeSet<String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect()
}

#[test]
fn full_run_writes_manifest_listed_files() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, roster) = fixture(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "rank",
        "--input",
        results.to_str().unwrap(),
        "--roster",
        roster.to_str().unwrap(),
        "--methods",
        "llsm,em,official,sonneborn-berger,buchholz,mix,start",
        "--mds",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).starts_with("wrote "), "stdout: {}", stdout(&out));

    let on_disk = file_names(&out_dir);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    let listed: BTreeSet<String> = manifest["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_owned())
        .collect();
    assert_eq!(on_disk, listed, "manifest file list must match the directory");

    for name in [
        "score_table.csv",
        "weights-a-llsm.csv",
        "weights-c-em.json",
        "ranking-final.csv",
        "ranking-sb.csv",
        "ranking-start.csv",
        "rankings.json",
        "distances-tau.csv",
        "distances-spearman.json",
        "mds.csv",
        "mds.json",
    ] {
        assert!(on_disk.contains(name), "missing {name}");
    }

    let labels: Vec<&str> = manifest["rankings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["label"].as_str().unwrap())
        .collect();
    assert_eq!(
        labels,
        [
            "A-LLSM", "B-LLSM", "C-LLSM", "D-LLSM", "C-EM", "Final", "SB", "Buchholz", "Mix",
            "Start"
        ]
    );
    assert!(manifest["mds"]["stress"].as_f64().unwrap() >= 0.0);
    assert!(manifest.get("timestamp").is_none());
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, roster) = fixture(tmp.path());
    let dirs = [tmp.path().join("r1"), tmp.path().join("r2")];
    for d in &dirs {
        let out = run(&[
            "rank",
            "--input",
            results.to_str().unwrap(),
            "--roster",
            roster.to_str().unwrap(),
            "--methods",
            "llsm,em,official,mix",
            "--mds",
            "--out-dir",
            d.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    }
    let names = file_names(&dirs[0]);
    assert_eq!(names, file_names(&dirs[1]));
    for name in names {
        let a = fs::read(dirs[0].join(&name)).unwrap();
        let b = fs::read(dirs[1].join(&name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn format_selection_limits_extensions() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, _) = fixture(tmp.path());
    let csv_dir = tmp.path().join("csv");
    let out = run(&[
        "rank",
        "--input",
        results.to_str().unwrap(),
        "--formats",
        "csv",
        "--out-dir",
        csv_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    for name in file_names(&csv_dir) {
        // The manifest is part of every run, whatever the formats say.
        assert!(
            name.ends_with(".csv") || name == "manifest.json",
            "unexpected {name}"
        );
    }

    let json_dir = tmp.path().join("json");
    let out = run(&[
        "rank",
        "--input",
        results.to_str().unwrap(),
        "--formats",
        "json",
        "--out-dir",
        json_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let names = file_names(&json_dir);
    assert!(names.iter().all(|n| n.ends_with(".json")));
    assert!(names.contains("rankings.json"));
    assert!(!names.contains("score_table.csv"));
}

#[test]
fn dumps_write_matrix_and_completion_files() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, _) = fixture(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "rank",
        "--input",
        results.to_str().unwrap(),
        "--methods",
        "llsm,em",
        "--scales",
        "A",
        "--em-scales",
        "C",
        "--dump-pcm",
        "--dump-completion",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let names = file_names(&out_dir);
    for name in ["pcm-a.csv", "pcm-c.json", "completion-c.csv", "completion-c.json"] {
        assert!(names.contains(name), "missing {name}");
    }
}

#[test]
fn usage_errors_exit_5() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, _) = fixture(tmp.path());
    let r = results.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["rank", "--input", r, "--no-such-flag"],
        vec!["rank", "--input", r, "--methods", "bogus"],
        vec!["rank", "--input", r, "--metrics", "kendall"],
        vec!["rank", "--input", r, "--formats", "xml"],
        // No roster file, so start ranks are unknown.
        vec!["rank", "--input", r, "--methods", "start"],
        // Two rankings cannot be embedded.
        vec!["rank", "--input", r, "--methods", "official,mix", "--mds"],
        vec!["rank", "--input", r, "--methods", "official", "--dump-completion"],
        vec!["rank", "--input", r, "--methods", "official", "--dump-pcm"],
        vec!["rank", "--input", r, "--scales", "Z"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 5, "args {args:?}, stderr: {}", stderr(&out));
    }
}

#[test]
fn data_errors_exit_2_with_line_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nope.csv");
    let out = run(&["rank", "--input", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let bad = tmp.path().join("bad.csv");
    fs::write(
        &bad,
        "round,team_a,team_b,game_points_a\n1,A,B,3\n2,A,B,2.25\n",
    )
    .unwrap();
    let out = run(&["rank", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("line 3"),
        "stderr should point at the bad row: {}",
        stderr(&out)
    );
}

#[test]
fn disconnected_results_exit_3_and_name_the_groups() {
    let tmp = tempfile::tempdir().unwrap();
    // Two groups of three that never meet across the divide.
    let split = tmp.path().join("split.csv");
    fs::write(
        &split,
        "round,team_a,team_b,game_points_a\n\
         1,A,B,3\n1,D,E,2\n\
         2,A,C,2.5\n2,D,F,1.5\n\
         3,B,C,2\n3,E,F,3.5\n",
    )
    .unwrap();
    let out = run(&["rank", "--input", split.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let err = stderr(&out);
    assert!(err.contains("group 1: A, B, C"), "stderr: {err}");
    assert!(err.contains("group 2: D, E, F"), "stderr: {err}");

    // Tie-break rankings never need the comparison graph.
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "rank",
        "--input",
        split.to_str().unwrap(),
        "--methods",
        "official,sonneborn-berger",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn solver_budget_exhaustion_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, _) = fixture(tmp.path());
    let out = run(&[
        "rank",
        "--input",
        results.to_str().unwrap(),
        "--methods",
        "em",
        "--em-sweep-cap",
        "0",
        "--out-dir",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4, "stderr: {}", stderr(&out));
}

#[test]
fn help_and_version_exit_0() {
    for args in [&["--help"][..], &["--version"][..], &["rank", "--help"][..]] {
        let out = run(args);
        assert_eq!(code(&out), 0, "args {args:?}");
    }
}

#[test]
fn custom_scale_becomes_selectable_by_file_stem() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, _) = fixture(tmp.path());
    let scale = tmp.path().join("steep.csv");
    fs::write(
        &scale,
        "game_points,ratio\n0,1/16\n0.5,1/8\n1,1/4\n1.5,1/2\n2,1\n2.5,2\n3,4\n3.5,8\n4,16\n",
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "rank",
        "--input",
        results.to_str().unwrap(),
        "--custom-scale",
        scale.to_str().unwrap(),
        "--scales",
        "A,steep",
        "--methods",
        "llsm",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let names = file_names(&out_dir);
    assert!(names.contains("weights-steep-llsm.csv"), "{names:?}");
    assert!(names.contains("ranking-steep-llsm.csv"), "{names:?}");

    // A stem that shadows a built-in letter is rejected up front.
    let clash = tmp.path().join("a.csv");
    fs::copy(&scale, &clash).unwrap();
    let out = run(&[
        "rank",
        "--input",
        results.to_str().unwrap(),
        "--custom-scale",
        clash.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 5, "stderr: {}", stderr(&out));
}

#[test]
fn out_dir_env_variable_is_the_fallback() {
    let tmp = tempfile::tempdir().unwrap();
    let (results, _) = fixture(tmp.path());
    let env_dir = tmp.path().join("from-env");
    let out = bin()
        .args(["rank", "--input", results.to_str().unwrap(), "--methods", "official"])
        .env("SWISSRANK_OUT_DIR", &env_dir)
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(env_dir.join("manifest.json").exists());
}

#[test]
fn short_teams_are_flagged_in_warnings() {
    let tmp = tempfile::tempdir().unwrap();
    // E sits out round 2, so it plays fewer matches than there are rounds.
    let odd = tmp.path().join("odd.csv");
    fs::write(
        &odd,
        "round,team_a,team_b,game_points_a\n\
         1,A,B,3\n1,C,D,2.5\n1,E,F,2\n\
         2,A,C,1.5\n2,B,F,2\n\
         3,A,E,2.5\n3,B,C,2\n3,D,F,1\n",
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "rank",
        "--input",
        odd.to_str().unwrap(),
        "--methods",
        "official",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("warning:"), "stderr: {err}");
    assert!(err.contains("E played"), "stderr: {err}");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert!(!manifest["warnings"].as_array().unwrap().is_empty());
}
