use std::path::Path;
use std::process::{Command, Output};

fn misforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_misforge"))
        .args(args)
        .env_remove("MISFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_dup_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dupg");
    let out = misforge(&["gen-dup", "--ell", "2", "--d", "2", "--k", "1", "--out", path_str(&file)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("p=2 q=4"));
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("dupg 1 2 36 2 4 2 2\n"));

    let out = misforge(&["verify", "--in", path_str(&file)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));

    let out = misforge(&["verify", "--in", path_str(&file), "--path-budget", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn mutated_dup_file_names_the_failing_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dupg");
    misforge(&["gen-dup", "--ell", "2", "--d", "1", "--k", "2", "--out", path_str(&file)]);
    let text = std::fs::read_to_string(&file).unwrap();
    // Route the first path through the second path's middle vertex.
    let lines: Vec<&str> = text.lines().collect();
    let second: Vec<&str> = lines[2].split_whitespace().collect();
    let mut first: Vec<String> = lines[1].split_whitespace().map(String::from).collect();
    first[4] = second[4].to_string();
    let mut edited: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    edited[1] = first.join(" ");
    let bad = dir.path().join("bad.dupg");
    std::fs::write(&bad, edited.join("\n") + "\n").unwrap();
    let out = misforge(&["verify", "--in", path_str(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL construction-endpoints"), "{}", stdout(&out));
}

#[test]
fn gen_dup_errors() {
    let out = misforge(&["gen-dup", "--n", "5", "--k", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("too-small-n"));
    let out = misforge(&["gen-dup", "--ell", "1", "--d", "1", "--k", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "dupg 1 2 3 1 1 1 1\nupc 0 0 1 2\npad 0\npad 0\n");
}

#[test]
fn instance_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("i.misr");
    let out = misforge(&["gen-instance", "--r", "1", "--toy", "1,1", "--n0", "2", "--seed", "4", "--out", path_str(&file)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("seed=4"));

    let out = misforge(&["check-instance", "--in", path_str(&file)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("edges-match-seed=true"));

    let out = misforge(&["predicate", "--in", path_str(&file)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS predicate-extraction: 0 mismatches"));

    let out = misforge(&["predicate", "--in", path_str(&file), "--K", "0"]);
    assert_eq!(code(&out), 0);
    let out = misforge(&["predicate", "--in", path_str(&file), "--K", "5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid-sequence"));
}

#[test]
fn corrupted_instance_fails_its_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("i.misr");
    misforge(&["gen-instance", "--r", "1", "--toy", "2,1", "--n0", "4", "--seed", "7", "--out", path_str(&file)]);
    let text = std::fs::read_to_string(&file).unwrap();
    // Drop the last clique edge but keep the section count consistent.
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let header = lines.iter().position(|l| l.starts_with("player 1 ")).unwrap();
    let count: usize = lines[header].split_whitespace().nth(2).unwrap().parse().unwrap();
    lines[header] = format!("player 1 {}", count - 1);
    lines.pop();
    let bad = dir.path().join("bad.misr");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let out = misforge(&["check-instance", "--in", path_str(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL clique-count"), "{}", stdout(&out));
}

#[test]
fn gen_instance_modes() {
    let out = misforge(&["gen-instance", "--r", "2", "--n", "100", "--n0", "4"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("size-relation-violated"));
    let out = misforge(&["gen-instance", "--r", "0", "--n0", "4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"vertices\":4"));
    let out = misforge(&["gen-instance", "--r", "1", "--n", "64", "--n0", "4", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"mode\":\"formula\""));
}

#[test]
fn budget_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dupg");
    misforge(&["gen-dup", "--ell", "2", "--d", "2", "--k", "1", "--out", path_str(&file)]);
    let out = Command::new(env!("CARGO_BIN_EXE_misforge"))
        .args(["verify", "--in", path_str(&file)])
        .env("MISFORGE_BUDGET", "paths=1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_misforge"))
        .args(["verify", "--in", path_str(&file)])
        .env("MISFORGE_BUDGET", "nonsense")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_rows_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"instances":[{"type":"toy","n0":2,"levels":[[1,1]],"seed":1}],
            "algorithms":["luby","greedy","residual:4"],"seeds":[0,1,2,3,4]}"#,
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let out = misforge(&["bench", "--spec", path_str(&spec), "--out", path_str(&csv)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,r,algorithm,passes,peak_words,cc_bits,mis_valid,seed");
    assert_eq!(lines.len(), 16);
    assert!(lines[1..].iter().all(|l| l.contains(",true,")));

    std::fs::write(&spec, "{}").unwrap();
    let out = misforge(&["bench", "--spec", path_str(&spec)]);
    assert_eq!(stdout(&out), "n,r,algorithm,passes,peak_words,cc_bits,mis_valid,seed\n");

    std::fs::write(&spec, r#"{"algorithms":["residual:0"]}"#).unwrap();
    assert_eq!(code(&misforge(&["bench", "--spec", path_str(&spec)])), 2);
}

#[test]
fn oversized_instance_hits_edge_budget() {
    let out = misforge(&["gen-instance", "--r", "1", "--n", "256", "--n0", "4", "--budget", "edges=1000"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("instance clique edges"));
}
