use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mathrelax::index::{parse_corpus, Index};
use mathrelax::synthetic::{generate, SyntheticSpec};
use mathrelax::trec::parse_run;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mathrelax"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn mathrelax")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture_index(dir: &Path) -> PathBuf {
    let index = dir.join("index.json");
    let out = run(bin().arg("index").arg(fixtures().join("corpus.tsv")).arg(&index));
    assert!(out.status.success(), "{}", stderr(&out));
    index
}

#[test]
fn index_prints_document_count() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    fs::write(&corpus, "d1\tmass $E=mc^2$ energy\nd2\tenergy\nd3\tmomentum\n").unwrap();
    let out = run(bin().arg("index").arg(&corpus).arg(dir.path().join("i.json")));
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("N=3 "), "{}", stdout(&out));
}

#[test]
fn index_rejects_duplicate_ids() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    fs::write(&corpus, "d1\ta\nd2\tb\nd1\tc\n").unwrap();
    let out = run(bin().arg("index").arg(&corpus).arg(dir.path().join("i.json")));
    assert!(!out.status.success());
    assert!(stderr(&out).contains("duplicate document id `d1`"), "{}", stderr(&out));
}

#[test]
fn index_missing_corpus_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .arg("index")
        .arg(dir.path().join("nope.tsv"))
        .arg(dir.path().join("i.json")));
    assert!(!out.status.success());
    assert!(stderr(&out).contains("reading corpus"));
}

#[test]
fn large_snapshot_loads_equal_to_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let (docs, _) = generate(&SyntheticSpec::default());
    let corpus = dir.path().join("corpus.tsv");
    let text: String = docs.iter().map(|d| format!("{}\t{}\n", d.doc_id, d.body)).collect();
    fs::write(&corpus, &text).unwrap();
    let snapshot = dir.path().join("i.json");
    let out = run(bin().arg("index").arg(&corpus).arg(&snapshot));
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("N=10000 "));
    let rebuilt = Index::build(parse_corpus(&text).unwrap()).unwrap();
    assert_eq!(Index::load(&snapshot).unwrap(), rebuilt);
}

#[test]
fn oqo_batch_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let index = fixture_index(dir.path());
    let out = run(bin()
        .args(["batch", "--strategy", "oqo"])
        .arg(&index)
        .arg(fixtures().join("topics.tsv")));
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text
        .lines()
        .all(|l| l.split_whitespace().count() == 6 && l.ends_with(" oqo-1000")));
    let parsed = parse_run(&text).unwrap();
    assert_eq!(parsed.topics.len(), 5);
    for entries in parsed.topics.values() {
        assert!(entries.len() <= 1000);
        assert!(entries.windows(2).all(|w| w[0].score > w[1].score));
    }
    assert!(stderr(&out).contains("cumulative search time"));
}

#[test]
fn lro_batch_runs_six_subqueries_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let index = fixture_index(dir.path());
    let batch = || {
        run(bin()
            .args(["batch", "--strategy", "lro", "--tag", "mine"])
            .arg(&index)
            .arg(fixtures().join("topics.tsv")))
    };
    let (a, b) = (batch(), batch());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().all(|l| l.ends_with(" mine")));
    let log = stderr(&a);
    assert_eq!(
        log.lines().filter(|l| l.contains("\t6 subqueries\t")).count(),
        5,
        "{log}"
    );
}

#[test]
fn batch_skips_bad_topics() {
    let dir = tempfile::tempdir().unwrap();
    let index = fixture_index(dir.path());
    let topics = dir.path().join("topics.tsv");
    fs::write(&topics, "A\t$E=mc^2$ relativity\nB\t\"unbalanced\n").unwrap();
    let out = run(bin().args(["batch", "--strategy", "lro"]).arg(&index).arg(&topics));
    assert!(out.status.success());
    assert!(stderr(&out).contains("skipped topic B"));
    assert!(stdout(&out).lines().all(|l| l.starts_with("A ")));
}

#[test]
fn batch_rejects_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    let index = fixture_index(dir.path());
    let topics = fixtures().join("topics.tsv");
    let out = run(bin().args(["batch", "--limit", "0"]).arg(&index).arg(&topics));
    assert!(!out.status.success());
    let out = run(bin().args(["batch", "--strategy", "xyz"]).arg(&index).arg(&topics));
    assert!(!out.status.success());
}

#[test]
fn eval_perfect_run() {
    let dir = tempfile::tempdir().unwrap();
    let qrels = dir.path().join("qrels");
    let run_file = dir.path().join("run");
    fs::write(&qrels, "T1 0 a 2\nT1 0 b 1\nT1 0 c 0\n").unwrap();
    fs::write(&run_file, "T1 Q0 a 1 2 x\nT1 Q0 b 2 1 x\n").unwrap();
    let out = run(bin().arg("eval").arg(&run_file).arg(&qrels));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Bpref \tall\t1.0000"), "{text}");
    assert!(text.contains("MAP   \tall\t1.0000"));
    assert!(text.contains("P@1   \tall\t1.0000"));
}

#[test]
fn eval_hand_built_bpref() {
    let dir = tempfile::tempdir().unwrap();
    let qrels = dir.path().join("qrels");
    let run_file = dir.path().join("run");
    fs::write(&qrels, "T 0 r1 1\nT 0 r2 4\nT 0 n1 0\nT 0 n2 0\n").unwrap();
    fs::write(&run_file, "T Q0 r1 1 3 x\nT Q0 n1 2 2 x\nT Q0 r2 3 1 x\n").unwrap();
    let out = run(bin().args(["eval", "--per-topic"]).arg(&run_file).arg(&qrels));
    assert!(out.status.success());
    assert!(stdout(&out).contains("Bpref \tall\t0.7500"), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("topic\tBpref"));
}

#[test]
fn eval_unknown_topics_fail() {
    let dir = tempfile::tempdir().unwrap();
    let qrels = dir.path().join("qrels");
    let run_file = dir.path().join("run");
    fs::write(&qrels, "T 0 r1 1\n").unwrap();
    fs::write(&run_file, "Z Q0 r1 1 3 x\n").unwrap();
    let out = run(bin().arg("eval").arg(&run_file).arg(&qrels));
    assert!(!out.status.success());
    assert!(stderr(&out).contains("no topic"));
}

#[test]
fn stats_columns_follow_plan() {
    let dir = tempfile::tempdir().unwrap();
    let index = fixture_index(dir.path());
    let topics = fixtures().join("topics.tsv");

    let out = run(bin().args(["stats", "--strategy", "oqo"]).arg(&index).arg(&topics));
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next().unwrap(), "topic\tsq1");

    let csv = dir.path().join("stats.csv");
    let out = run(bin()
        .args(["stats", "--strategy", "lro", "--csv"])
        .arg(&csv)
        .arg(&index)
        .arg(&topics));
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        stdout(&out).lines().next().unwrap(),
        "topic\tsq1\tsq2\tsq3\tsq4\tsq5\tsq6"
    );

    let csv = fs::read_to_string(csv).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 30);
    let masks: Vec<&str> = rows.iter().take(6).map(|r| r[2]).collect();
    assert_eq!(masks, ["11-111", "11-110", "11-100", "11-000", "10-111", "00-111"]);
    for topic in rows.chunks(6) {
        let hits: Vec<usize> = topic.iter().map(|r| r[3].parse().unwrap()).collect();
        // Dropping keywords only widens the match set up to the formulae-only subquery.
        assert!(hits[..4].windows(2).all(|w| w[0] <= w[1]), "{hits:?}");
        assert!(hits[3] >= hits[0]);
    }
}
