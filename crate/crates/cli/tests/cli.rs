use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ecw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecw")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path_str(&out)]);
    let o = ecw(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn json_stdout(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn ladder_width_report() {
    let dir = TempDir::new().unwrap();
    let g = generate(&dir, "ladder.json", &["ladder", "5"]);
    let report = json_stdout(&ecw(&["ecw", "--input", path_str(&g), "--json"]));
    assert_eq!(report["width"], 3);
    assert_eq!(report["exact"], true);
    assert_eq!(report["witness"].as_array().unwrap().len(), 9);
    assert_eq!(report["version"], 1);
}

#[test]
fn decomposition_written_and_checked() {
    let dir = TempDir::new().unwrap();
    let g = generate(&dir, "gbt.json", &["gbt", "2"]);
    let td = dir.path().join("td.json");
    let o = ecw(&["ecw", "--input", path_str(&g), "--decomposition", path_str(&td)]);
    assert!(o.status.success());
    let o = ecw(&["check-decomp", "--graph", path_str(&g), "--decomp", path_str(&td)]);
    assert_eq!(o.status.code(), Some(0));

    std::fs::write(&td, r#"{"parent":[null],"bags":[[0,1]]}"#).unwrap();
    let o = ecw(&["check-decomp", "--graph", path_str(&g), "--decomp", path_str(&td)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn heuristic_bounds_exact() {
    let dir = TempDir::new().unwrap();
    let g = generate(&dir, "r.json", &["random", "9", "14", "--seed", "4"]);
    let exact = json_stdout(&ecw(&["ecw", "--input", path_str(&g), "--json"]));
    let heur = json_stdout(&ecw(&["ecw", "--input", path_str(&g), "--mode", "heuristic", "--seed", "1", "--json"]));
    let oracle = json_stdout(&ecw(&["ecw", "--input", path_str(&g), "--mode", "oracle", "--json"]));
    assert!(heur["width"].as_u64() >= exact["width"].as_u64());
    assert_eq!(oracle["width"], exact["width"]);
    assert_eq!(heur["seed"], 1);
}

#[test]
fn dimacs_input() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("k4.col");
    std::fs::write(&p, "c K4\np edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n").unwrap();
    let report = json_stdout(&ecw(&["ecw", "--input", path_str(&p), "--format", "dimacs", "--json"]));
    assert_eq!(report["width"], 4);
}

#[test]
fn every_solver_runs_from_generated_instances() {
    let dir = TempDir::new().unwrap();
    let cases: [(&str, &[&str]); 5] = [
        ("edp", &["rand-edp", "8", "11", "3"]),
        ("lcol", &["rand-lcol", "8", "11", "3"]),
        ("csp", &["rand-csp", "6", "5", "2"]),
        ("srti", &["rand-srti", "8", "12"]),
        ("mincca", &["rand-mincca", "6", "9", "2"]),
    ];
    for (problem, args) in cases {
        let inst = generate(&dir, &format!("{problem}.json"), args);
        let report = json_stdout(&ecw(&["solve", problem, "--input", path_str(&inst), "--json"]));
        assert_eq!(report["command"], format!("solve {problem}"));
        assert!(report["tables"]["max_table"].as_u64().is_some(), "{problem}");
        if problem == "srti" {
            assert!(report["value"].as_u64().is_some());
        }
    }
}

#[test]
fn solve_accepts_witness_from_width_report() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&dir, "edp.json", &["rand-edp", "7", "10", "2", "--seed", "9"]);
    let report = ecw(&["ecw", "--input", path_str(&inst), "--json"]);
    let tree = dir.path().join("tree.json");
    std::fs::write(&tree, &report.stdout).unwrap();
    let with_tree = json_stdout(&ecw(&["solve", "edp", "--input", path_str(&inst), "--tree", path_str(&tree), "--json"]));
    let without = json_stdout(&ecw(&["solve", "edp", "--input", path_str(&inst), "--json"]));
    assert_eq!(with_tree["verdict"], without["verdict"]);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(ecw(&["ecw", "--input", path_str(&bad)]).status.code(), Some(2));

    let lcol = generate(&dir, "lcol.json", &["rand-lcol", "6", "8", "2"]);
    assert_eq!(ecw(&["solve", "edp", "--input", path_str(&lcol)]).status.code(), Some(2));

    let big = generate(&dir, "big.json", &["random", "30", "60"]);
    assert_eq!(ecw(&["ecw", "--input", path_str(&big), "--mode", "oracle"]).status.code(), Some(3));

    let loops = dir.path().join("loop.json");
    std::fs::write(&loops, r#"{"kind":"graph","n":2,"edges":[[0,0]]}"#).unwrap();
    assert_eq!(ecw(&["ecw", "--input", path_str(&loops)]).status.code(), Some(2));

    let tree = dir.path().join("t.json");
    std::fs::write(&tree, r#"{"edges":[[0,5]]}"#).unwrap();
    let lc = generate(&dir, "l.json", &["rand-lcol", "6", "8", "2"]);
    assert_eq!(ecw(&["solve", "lcol", "--input", path_str(&lc), "--tree", path_str(&tree)]).status.code(), Some(1));
}
