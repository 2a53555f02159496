use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const APPEND: &str = ":- entry(append(any, any, any)).\nappend([], Ys, Ys).\nappend([X|Xs], Ys, [X|Zs]) :- append(Xs, Ys, Zs).\n";

fn groundness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groundness")).args(args).output().unwrap()
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_json_follows_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "append.pl", APPEND);
    let o = groundness(&["analyze", &f, "--domain", "def-gep", "--strategy", "ord", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["program"], "append.pl");
    assert_eq!(v["domain"], "def-gep");
    assert_eq!(v["strategy"], "ord");
    assert_eq!(v["switches"], "egpr");
    assert_eq!(v["updates"]["total"], 3);
    assert_eq!(v["updates"]["perKey"]["answ append/3"], 2);
    for k in ["meet", "join", "joinDiff", "equiv", "project", "rename", "projFilt", "projElim"] {
        assert!(v["counters"][k].is_u64(), "{k}");
    }
    assert_eq!(v["chainHistogram"], serde_json::json!([0, 1, 1]));
    assert_eq!(v["groundArgs"], 0);
    assert_eq!(v["answerPatterns"][0], "append(X1, X2, X3) :- X1 <- X3, X2 <- X3, X3 <- X1 & X2.");
}

#[test]
fn json_is_deterministic_and_matches_text() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "append.pl", APPEND);
    let a = groundness(&["analyze", &f, "--format", "json"]);
    let b = groundness(&["analyze", &f, "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let text = stdout(&groundness(&["analyze", &f]));
    assert!(text.contains(&format!("updates          {}", v["updates"]["total"])));
    assert!(text.contains(&format!("meet {} join {}", v["counters"]["meet"], v["counters"]["join"])));
}

#[test]
fn entry_flag_overrides_directives() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "append.pl", APPEND);
    let o = groundness(&["analyze", &f, "--entry", "append(g,g,any)", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["entries"][0], "append(g,g,any)");
    assert_eq!(v["answerPatterns"][0], "append(g, g, g).");
    assert_eq!(v["groundArgs"], 3);
}

#[test]
fn strategy_matrix_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "append.pl", APPEND);
    let o = groundness(&["analyze", &f, "--strategy", "matrix"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("strategy  ").count(), 6);
    assert!(out.trim_end().ends_with("agreement: all 6 runs produce equivalent tables"));

    let o = groundness(&["analyze", &f, "--strategy", "matrix", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 6);
    assert_eq!(v["agreement"], true);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "append.pl", APPEND);
    assert_eq!(groundness(&["analyze", &f, "--frobnicate"]).status.code(), Some(2));
    assert_eq!(groundness(&["analyze", &f, "--strategy", "fast"]).status.code(), Some(2));
    assert_eq!(groundness(&["analyze", &f, "--switches", "eex"]).status.code(), Some(2));
    assert_eq!(groundness(&["analyze", &f, "--entry", "append(3)"]).status.code(), Some(2));
    assert_eq!(groundness(&["analyze", &f, "--domain", "pos"]).status.code(), Some(2));
    assert_eq!(groundness(&[]).status.code(), Some(2));
}

#[test]
fn analysis_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.pl");
    let o = groundness(&["analyze", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let bad = write(&dir, "bad.pl", "p(X :- q.\n");
    let o = groundness(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at 1:"));
    let f = write(&dir, "append.pl", APPEND);
    assert_eq!(groundness(&["analyze", &f, "--entry", "nothere(g)"]).status.code(), Some(1));
}

#[test]
fn dot_dump() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "append.pl", APPEND);
    let dot = dir.path().join("g.dot");
    assert!(groundness(&["analyze", &f, "--dot", dot.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("append/3"));
}

#[test]
fn clpr_blocks_ground_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "c.pl", ":- entry(p(any, any)).\np(X, Y) :- { X = Y + 1 }.\n");
    let plain: Value = serde_json::from_slice(&groundness(&["analyze", &f, "--format", "json"]).stdout).unwrap();
    let assumed: Value =
        serde_json::from_slice(&groundness(&["analyze", &f, "--format", "json", "--assume-clpr-ground"]).stdout).unwrap();
    assert_eq!(plain["groundArgs"], 0);
    assert_eq!(assumed["groundArgs"], 2);
}

#[test]
fn empty_corpus_gives_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = groundness(&["corpus", dir.path().to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"], serde_json::json!([]));
}

#[test]
fn corpus_continues_past_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir, "a.pl", APPEND);
    write(&dir, "b.pl", "p(X :- q.\n");
    let o = groundness(&["corpus", dir.path().to_str().unwrap(), "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["errors"].as_array().unwrap().len(), 1);
}

#[test]
fn bundled_corpus_table() {
    let o = groundness(&["corpus", corpus_dir().to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 10);
    let summary: Vec<(String, u64, u64, u64)> = rows
        .iter()
        .map(|r| {
            (
                r["program"].as_str().unwrap().to_string(),
                r["size"].as_u64().unwrap(),
                r["groundArgs"]["def-gep"].as_u64().unwrap(),
                r["groundArgs"]["epos"].as_u64().unwrap(),
            )
        })
        .collect();
    let golden: Vec<(String, u64, u64, u64)> = [
        ("append.pl", 2, 0, 0),
        ("builtins.pl", 10, 7, 7),
        ("deepscc.pl", 18, 19, 19),
        ("disjunction.pl", 22, 8, 8),
        ("mortgage.pl", 2, 1, 1),
        ("mutual.pl", 14, 6, 6),
        ("peephole.pl", 13, 11, 11),
        ("qsort.pl", 6, 9, 9),
        ("queens.pl", 11, 14, 14),
        ("rev.pl", 4, 5, 5),
        ("rotate.pl", 3, 2, 1),
        ("serialize.pl", 12, 4, 4),
    ]
    .iter()
    .map(|&(n, s, d, e)| (n.to_string(), s, d, e))
    .collect();
    assert_eq!(summary, golden);
}

#[test]
fn corpus_grids() {
    let dir = corpus_dir();
    let o = groundness(&["corpus", dir.to_str().unwrap(), "--switches", "sweep", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for r in v["rows"].as_array().unwrap() {
        assert_eq!(r["grid"].as_array().unwrap().len(), 10);
        assert_eq!(r["agreement"], true);
    }
    let o = groundness(&["corpus", dir.to_str().unwrap(), "--strategy", "matrix"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().contains("dyd"));
    assert!(!out.contains(" NO"));
}

#[test]
fn selfcheck_passes() {
    let o = groundness(&["selfcheck", "--samples", "100", "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("100 random pairs"));
}
