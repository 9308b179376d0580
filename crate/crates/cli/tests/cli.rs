use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_egocircles"));
    c.env_remove("EGOCIRCLES_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn summary(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json summary")
}

fn paper(id: &str, date: &str, authors: &[&str]) -> String {
    let authors: Vec<Value> = authors
        .iter()
        .map(|a| serde_json::json!({ "author_id": a, "affiliation": null }))
        .collect();
    serde_json::json!({ "paper_id": id, "date": date, "citations": 1, "authors": authors }).to_string()
}

fn write(path: &Path, lines: &[String]) {
    std::fs::write(path, lines.join("\n") + "\n").unwrap();
}

fn stderr_line(out: &Output) -> String {
    let s = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = s.lines().filter(|l| l.starts_with("error ")).collect();
    assert_eq!(lines.len(), 1, "{s}");
    lines[0].to_string()
}

#[test]
fn empty_corpus_gives_zero_counts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    std::fs::write(&corpus, "").unwrap();
    let out_dir = dir.path().join("out");
    let s = summary(&run(&[
        "-o",
        out_dir.to_str().unwrap(),
        "run",
        "--corpus",
        corpus.to_str().unwrap(),
    ]));
    assert_eq!(s["ingest"]["papers_kept"], 0);
    assert_eq!(s["egonet"]["complete"], 0);
    assert_eq!(s["analyze"]["records"], 0);
    assert_eq!(s["analyze"]["cells"], s["analyze"]["suppressed"]);
    assert!(out_dir.join("correlation_report.csv").exists());
}

#[test]
fn malformed_lines_skipped_unless_strict() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    write(
        &corpus,
        &[
            paper("p1", "2010-01", &["a", "b"]),
            "{not json".into(),
            paper("p2", "2010-13", &["a", "b"]),
            paper("p1", "2011-01", &["a", "b"]),
            paper("p3", "2012-05", &["a", "b"]),
        ],
    );
    let out_dir = dir.path().join("out");
    let s = summary(&run(&[
        "-o",
        out_dir.to_str().unwrap(),
        "ingest",
        "--corpus",
        corpus.to_str().unwrap(),
    ]));
    assert_eq!(s["lines_read"], 5);
    assert_eq!(s["skipped_lines"], 3);
    assert_eq!(s["papers_kept"], 2);
    assert_eq!(s["authors"], 2);

    let out = run(&[
        "--strict",
        "-o",
        out_dir.to_str().unwrap(),
        "ingest",
        "--corpus",
        corpus.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_line(&out).contains("code=schema"));
}

#[test]
fn oversized_paper_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let many: Vec<String> = (0..30).map(|i| format!("x{i}")).collect();
    let many: Vec<&str> = many.iter().map(String::as_str).collect();
    write(
        &corpus,
        &[paper("big", "2015-03", &many), paper("small", "2015-04", &["a", "b", "c"])],
    );
    let s = summary(&run(&[
        "-o",
        dir.path().join("out").to_str().unwrap(),
        "ingest",
        "--corpus",
        corpus.to_str().unwrap(),
    ]));
    assert_eq!(s["papers_loaded"], 2);
    assert_eq!(s["papers_dropped"], 1);
    assert_eq!(s["authors"], 3);
}

#[test]
fn solo_authors_have_no_complete_networks() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let lines: Vec<String> = (0..6)
        .map(|i| paper(&format!("p{i}"), &format!("20{:02}-06", 10 + i), &[&format!("a{}", i % 3)]))
        .collect();
    write(&corpus, &lines);
    let out_dir = dir.path().join("out");
    let s = summary(&run(&[
        "-o",
        out_dir.to_str().unwrap(),
        "run",
        "--corpus",
        corpus.to_str().unwrap(),
    ]));
    assert_eq!(s["ingest"]["authors"], 3);
    assert_eq!(s["egonet"]["with_alters"], 0);
    assert_eq!(s["egonet"]["complete"], 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let o = out_dir.to_str().unwrap();

    let out = run(&["-o", o, "egonet"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_line(&out).contains("code=missing_artifact"));

    let out = run(&["--percentile", "1.5", "-o", o, "ingest", "--corpus", "x"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).contains("code=config"));

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[analysis]\nreplica = 3\n").unwrap();
    let out = run(&["-c", cfg.to_str().unwrap(), "-o", o, "report"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["-o", o, "ingest", "--corpus", dir.path().join("absent.jsonl").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).contains("code=io"));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let many: Vec<String> = (0..5).map(|i| format!("x{i}")).collect();
    let many: Vec<&str> = many.iter().map(String::as_str).collect();
    write(&corpus, &[paper("p", "2015-03", &many)]);
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "corpus = {:?}\noutput_dir = {:?}\n[ingest]\nmax_authors = 4\n",
            corpus.to_str().unwrap(),
            dir.path().join("out").to_str().unwrap()
        ),
    )
    .unwrap();
    let s = summary(&bin().env("EGOCIRCLES_CONFIG", &cfg).arg("ingest").output().unwrap());
    assert_eq!(s["papers_dropped"], 1);
    let s = summary(&run(&["-c", cfg.to_str().unwrap(), "--max-authors", "5", "ingest"]));
    assert_eq!(s["papers_dropped"], 0);
}

#[test]
fn synth_then_run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let synth_dir = dir.path().join("synth");
    let s = summary(&run(&[
        "--seed",
        "3",
        "-o",
        synth_dir.to_str().unwrap(),
        "synth",
        "--authors",
        "40",
    ]));
    assert!(s["publications"].as_u64().unwrap() > 0, "{s}");
    let corpus = synth_dir.join("synth_corpus.jsonl");
    let registry = synth_dir.join("registry.csv");

    let mut reports = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let s = summary(&run(&[
            "--seed",
            "11",
            "--replicas",
            "200",
            "--min-group-size",
            "10",
            "-o",
            out_dir.to_str().unwrap(),
            "run",
            "--corpus",
            corpus.to_str().unwrap(),
            "--registry",
            registry.to_str().unwrap(),
        ]));
        assert!(s["egonet"]["complete"].as_u64().unwrap() >= 40, "{s}");
        assert!(s["mobility"]["with_affiliations"].as_u64().unwrap() >= 40, "{s}");
        reports.push(std::fs::read(out_dir.join("correlation_report.csv")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let text = String::from_utf8(reports.pop().unwrap()).unwrap();
    assert!(text.starts_with("group,stage,status,split,layer,metric,n,r,r_corrected,ci_low,ci_high,suppressed"));
}
