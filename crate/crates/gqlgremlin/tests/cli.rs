use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gqlgremlin_core::fixtures;
use gqlgremlin_core::ir::normalize_whitespace;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqlgremlin")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_reports_violations_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let todo = write(dir.path(), "todo.json", fixtures::TODO_SCHEMA_JSON);
    let o = run(&["validate", todo.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ok\n");

    let (_, v9) = fixtures::VIOLATION_FIXTURES[8];
    let bad = write(dir.path(), "bad.json", v9);
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("V9\tedges/likes2\t"));
}

#[test]
fn sdl_matches_library_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "movielens.json", fixtures::MOVIELENS_SCHEMA_JSON);
    let o = run(&["sdl", path.to_str().unwrap()]);
    assert!(o.status.success());
    let doc = gqlgremlin_core::synthesize(&fixtures::movielens_schema()).unwrap();
    assert_eq!(stdout(&o), doc.sdl());
}

#[test]
fn transpile_prints_both_flavors() {
    let dir = tempfile::tempdir().unwrap();
    let schema = write(dir.path(), "todo.json", fixtures::TODO_SCHEMA_JSON);
    let query = write(dir.path(), "q.graphql", fixtures::TODO_USER_LIKES);
    let (s, q) = (schema.to_str().unwrap(), query.to_str().unwrap());

    let o = run(&["transpile", "--schema", s, "--query", q, "--counters"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim_end(), normalize_whitespace(include_str!("../../core/tests/data/todo_user_likes.py.txt")));
    let counters: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(counters["S"], 5);

    let o = run(&["transpile", "--schema", s, "--query", q, "--flavor", "groovy"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("hasLabel('User')") && text.trim_end().ends_with(".toList()"), "{text}");

    let broken = write(dir.path(), "broken.graphql", "{ userList {");
    let o = run(&["transpile", "--schema", s, "--query", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at 1:13"));
}

#[test]
fn bench_refuses_other_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let todo = write(dir.path(), "todo.json", fixtures::TODO_SCHEMA_JSON);
    let o = run(&["bench", "--schema", todo.to_str().unwrap(), "--synthetic"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn synthetic_bench_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let schema = write(dir.path(), "movielens.json", fixtures::MOVIELENS_SCHEMA_JSON);
    let out = dir.path().join("report.json");
    let o = run(&["bench", "--schema", schema.to_str().unwrap(), "--synthetic", "--runs", "6", "--warmup", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    let rows = report["queries"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["n"] == 4));
    assert_eq!(report["linearity"]["points"].as_array().unwrap().len(), 5);
}

#[test]
fn ingest_reports_counts_for_a_small_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "u.genre", "unknown|0\nAction|1\n\n");
    write(d, "u.occupation", "artist\nwriter\n");
    write(d, "u.user", "1|24|M|writer|85711\n2|53|F|artist|V3N4P\n");
    write(d, "u.item", "1|Toy Story (1995)|01-Jan-1995||http://x|0|1\n2|Nothing (1999)||||1|1\n");
    write(d, "u.data", "1\t1\t5\t874965758\n2\t1\t3\t876893171\n2\t2\t1\t878542960\n");
    let o = run(&["ingest", "--data", d.to_str().unwrap(), "--snapshot", d.join("snap.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["users"], 2);
    assert_eq!(report["movies"], 2);
    assert_eq!(report["rated"], 3);
    assert_eq!(report["hasGenre"], 3);
    assert_eq!(report["nonNumericZips"], serde_json::json!([[2, "V3N4P"]]));
    let store = gqlgremlin_core::GraphStore::from_json(&fs::read_to_string(d.join("snap.json")).unwrap()).unwrap();
    assert_eq!(store.vertex_count(), 2 + 2 + 2 + 2);
}

#[test]
fn ingest_names_the_bad_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "u.genre", "Action|0\n");
    write(d, "u.occupation", "writer\n");
    write(d, "u.user", "1|24|M|writer|85711\n1x|24|M|writer|85711\n");
    let o = run(&["ingest", "--data", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("u.user:2"));
}
