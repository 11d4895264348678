use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use huopm::fixtures::{EX_PROFITS, EX_SPMF, EX_TRANSACTIONS};
use huopm::io::STATS_HEADER;
use tempfile::TempDir;

fn huopm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_huopm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Example {
    dir: TempDir,
    spmf: PathBuf,
    qty: PathBuf,
    prof: PathBuf,
}

fn example() -> Example {
    let dir = tempfile::tempdir().unwrap();
    let spmf = write(&dir, "ex.txt", EX_SPMF);
    let qty = write(&dir, "ex.qty", EX_TRANSACTIONS);
    let prof = write(&dir, "ex.prof", EX_PROFITS);
    Example { dir, spmf, qty, prof }
}

#[test]
fn mine_example_database() {
    let ex = example();
    let out = huopm(&["mine", "--input", s(&ex.qty), "--format", "qty", "--profit", s(&ex.prof),
        "--minsup", "0.3", "--minuo", "0.3", "--minlen", "1", "--maxlen", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 18);
    assert_eq!(lines[0], "d #SUP: 6 #UO: 0.35155");
    assert!(lines.contains(&"a e b #SUP: 4 #UO: 0.88208"));
}

#[test]
fn both_formats_give_the_same_file() {
    let ex = example();
    let spmf = huopm(&["mine", "--input", s(&ex.spmf), "--minsup", "0.3", "--minuo", "0.3", "--maxlen", "3"]);
    let qty = huopm(&["mine", "--input", s(&ex.qty), "--format", "qty", "--profit", s(&ex.prof),
        "--minsup", "0.3", "--minuo", "0.3", "--maxlen", "3"]);
    let relabel = |t: String| {
        t.lines()
            .map(|l| {
                let (items, rest) = l.split_once(" #SUP").unwrap();
                let items: Vec<String> = items
                    .split(' ')
                    .map(|i| ((b'a' + i.parse::<u8>().unwrap() - 1) as char).to_string())
                    .collect();
                format!("{} #SUP{rest}", items.join(" "))
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(relabel(stdout(&spmf)), stdout(&qty).lines().collect::<Vec<_>>());
}

#[test]
fn maxlen_one_and_output_file() {
    let ex = example();
    let out_path = ex.dir.path().join("r.txt");
    let stats = ex.dir.path().join("s.csv");
    let out = huopm(&["mine", "--input", s(&ex.spmf), "--minsup", "0.3", "--minuo", "0.3",
        "--maxlen", "1", "--output", s(&out_path), "--stats", s(&stats)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let body = fs::read_to_string(&out_path).unwrap();
    assert_eq!(body.lines().count(), 3);
    let csv = fs::read_to_string(&stats).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(STATS_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "ex");
    assert_eq!(row[4], "1");
    assert_eq!(row[8], "3");
}

#[test]
fn input_errors_exit_two() {
    let ex = example();
    let cases: Vec<Vec<&str>> = vec![
        vec!["mine", "--input", s(&ex.spmf), "--minsup", "1.5", "--minuo", "0.3"],
        vec!["mine", "--input", s(&ex.spmf), "--minsup", "0.3"],
        vec!["mine", "--input", s(&ex.spmf), "--minsup", "0.3", "--minuo", "0.3", "--minlen", "4", "--maxlen", "3"],
        vec!["mine", "--input", s(&ex.spmf), "--minsup", "0.3", "--minuo", "0.3", "--threads", "0"],
        vec!["mine", "--input", s(&ex.qty), "--format", "qty", "--minsup", "0.3", "--minuo", "0.3"],
        vec!["mine", "--input", "/nonexistent/db.txt", "--minsup", "0.3", "--minuo", "0.3"],
        vec!["mine", "--input", s(&ex.qty), "--minsup", "0.3", "--minuo", "0.3"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = huopm(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn inconsistent_transaction_utility_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.txt", "1 2:10:3 4\n");
    let out = huopm(&["mine", "--input", s(&bad), "--minsup", "0.3", "--minuo", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn verify_reports_match() {
    let ex = example();
    let out = huopm(&["verify", "--input", s(&ex.spmf), "--minsup", "0.3", "--minuo", "0.3", "--maxlen", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "MATCH: 18 patterns");

    let out = huopm(&["verify", "--input", s(&ex.spmf), "--random", "25", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 25);
    assert!(text.lines().all(|l| l.contains("MATCH")));
}

#[test]
fn verify_refuses_large_vocabulary() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.txt");
    let out = huopm(&["gen", "--items", "30", "--transactions", "20", "--avg-len", "5",
        "--format", "spmf", "--output", s(&big)]);
    assert_eq!(out.status.code(), Some(0));
    let out = huopm(&["verify", "--input", s(&big), "--minsup", "0.2", "--minuo", "0.2", "--maxlen", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = huopm(&["verify", "--input", s(&big), "--minsup", "0.2", "--minuo", "0.2", "--maxlen", "2",
        "--item-cap", "40"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let out = huopm(&["gen", "--items", "10", "--transactions", "40", "--avg-len", "4", "--seed", "9",
            "--output", s(p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(a.with_extension("prof")).unwrap(), fs::read(b.with_extension("prof")).unwrap());
    assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 40);

    let out = huopm(&["verify", "--input", s(&a), "--format", "qty", "--profit", s(&a.with_extension("prof")),
        "--random", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let c = dir.path().join("c.txt");
    huopm(&["gen", "--items", "10", "--transactions", "40", "--avg-len", "4", "--seed", "10", "--output", s(&c)]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn bench_maxlen_sweep_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("dense.txt");
    huopm(&["gen", "--items", "16", "--transactions", "300", "--avg-len", "9", "--seed", "2",
        "--format", "spmf", "--output", s(&db)]);
    let out = huopm(&["bench", "--input", s(&db), "--minsup", "0.2", "--minuo", "0.3",
        "--sweep", "maxlen", "--values", "1,2,3,4,5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(STATS_HEADER));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 6);
    let maxlens: Vec<&str> = rows.iter().map(|r| r[4].as_str()).collect();
    assert_eq!(maxlens, ["1", "2", "3", "4", "5", "0"]);
    let visited: Vec<u64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(visited[..5].windows(2).all(|w| w[0] <= w[1]), "{visited:?}");
    assert!(visited[2] < visited[5], "{visited:?}");

    let out = huopm(&["bench", "--input", s(&db), "--minsup", "0.2", "--minuo", "0.3",
        "--sweep", "minsup", "--values", "0.2,x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threads_give_identical_files() {
    let ex = example();
    let run = |threads: &str, name: &str| {
        let p = ex.dir.path().join(name);
        let out = huopm(&["mine", "--input", s(&ex.spmf), "--minsup", "0.1", "--minuo", "0.2",
            "--threads", threads, "--output", s(&p)]);
        assert_eq!(out.status.code(), Some(0));
        fs::read(p).unwrap()
    };
    let one = run("1", "one.txt");
    assert_eq!(one, run("4", "four.txt"));
    assert_eq!(one, run("1", "again.txt"));
}
