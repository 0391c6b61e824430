use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monochrome"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_balance_reports_witness() {
    let o = run(&["--pattern", "k4", "check-balance"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("strictly 1-balanced: yes"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tailed.txt");
    fs::write(&file, "4 4\n0 1\n1 2\n0 2\n2 3\n").unwrap();
    let o = run(&["--pattern", path_str(&file), "check-balance"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("strictly 1-balanced: no"));
    assert!(text.contains("witness"));
}

#[test]
fn malformed_pattern_is_a_usage_error_naming_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    fs::write(&file, "3 3\n0 1\n1 1\n0 2\n").unwrap();
    let o = run(&["--pattern", path_str(&file), "check-balance"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["check-balance"])), 1);
    assert_eq!(code(&run(&["--pattern", "x9", "check-balance"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn count_copies_on_complete_and_file_hosts() {
    let o = run(&["--pattern", "diamond", "count-copies", "--n", "6"]);
    assert_eq!(stdout(&o).trim(), "90");

    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("host.txt");
    fs::write(&host, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let o = run(&["--pattern", "k3", "count-copies", "--host", path_str(&host)]);
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn sample_dump_load_and_minimize() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("h.txt");
    let o = run(&[
        "--pattern",
        "k3",
        "--seed",
        "7",
        "sample",
        "--n",
        "14",
        "--q",
        "0.1",
        "--dump",
        path_str(&dump),
    ]);
    assert_eq!(code(&o), 0);
    let summary = stdout(&o);
    let o = run(&["--pattern", "k3", "sample", "--load", path_str(&dump)]);
    let loaded = stdout(&o);
    let edges = |s: &str| {
        s.split("hyperedges = ")
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(edges(&summary), edges(&loaded));

    let o = run(&[
        "--pattern",
        "k3",
        "minimize",
        "--load",
        path_str(&dump),
        "--method",
        "exact",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "run_id,method,n,c,seed,min_mono,edges,certified,wall_ms"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[1], "exact");
    assert_eq!(row[7], "true");
    let exact_min: u64 = row[5].parse().unwrap();

    let o = run(&[
        "--pattern",
        "k3",
        "minimize",
        "--load",
        path_str(&dump),
        "--method",
        "anneal",
    ]);
    let row: Vec<String> = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    let anneal_min: u64 = row[5].parse().unwrap();
    assert!(anneal_min >= exact_min);
    assert_eq!(row[7], (anneal_min == 0).to_string());
}

#[test]
fn oversized_exact_request_exits_two() {
    let o = run(&[
        "--pattern",
        "k3",
        "minimize",
        "--n",
        "40",
        "--c",
        "1",
        "--method",
        "exact",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
}

#[test]
fn estimate_report_roundtrip_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("k3.txt"), "3 3\n0 1\n1 2\n0 2\n").unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "pattern = k3.txt\nn = 30, 60\nc = 1.5\nseeds = 2\nrestarts = 2\nseed = 11\n",
    )
    .unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&[
            "estimate-m",
            "--config",
            path_str(&cfg),
            "--no-timing",
            "--out",
            path_str(out),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(
        text.starts_with("n,c,seed,min_mono,edges,min_mono_per_n,predictor_m,certified,wall_ms")
    );
    assert_eq!(text.lines().count(), 5);

    let o = run(&["report", "--input", path_str(&a)]);
    assert_eq!(code(&o), 0);
    let report = stdout(&o);
    assert!(report.starts_with("c,certified,n,count,"));
    assert_eq!(report.lines().count(), 3);

    let junk = dir.path().join("junk.csv");
    fs::write(&junk, "hello\n1\n").unwrap();
    assert_eq!(code(&run(&["report", "--input", path_str(&junk)])), 1);
}

#[test]
fn surrogate_writes_bucket_rows() {
    let o = run(&[
        "--pattern",
        "k3",
        "surrogate",
        "--n",
        "10",
        "--c",
        "2",
        "--fields",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "field_seed,bucket_h,alpha,T_alpha,objective,vn_running_mean"
    );
    assert_eq!(lines.count(), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("V_n"));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = run(&["verify", "--corrupt"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("FAIL [stat] field-covariance-monte-carlo"));

    let o = run(&["verify", "--corrupt", "--strict"]);
    assert_eq!(code(&o), 3);
}
