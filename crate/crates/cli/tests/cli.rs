use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loosepath")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn five_edge_file(dir: &Path) -> String {
    let path = dir.join("five.txt");
    std::fs::write(&path, "5 2\n1 2\n2 5\n1 3\n3 4\n4 5\n").unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn expect_prints_value_and_band() {
    let o = run(&["expect", "--r", "3", "--p", "0.5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("E X = 2.6416"), "{out}");
    assert!(out.contains("bounds [2.125000, 3.375000]"), "{out}");
}

#[test]
fn predict_dense() {
    let o = run(&["predict", "--n", "1000000", "--r", "3", "--p", "0.5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("regime T1.1-dense"));
    assert!(out.contains("[0.2963n, 0.4444n]"), "{out}");
    let o = run(&["predict", "--n", "1000000", "--r", "3", "--p", "0.5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"], "T1.1-dense");
    assert_eq!(v["p"], 0.5);
    assert!(v["band"]["provenance"].as_array().unwrap().len() >= 2);
}

#[test]
fn lmax_on_edge_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = five_edge_file(dir.path());
    let o = run(&["lmax", "--edges-file", &f]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("lmax 3\n"));
    assert!(out.contains("witness 1-3-4-5\n"));
    let o = run(&["lmax", "--edges-file", &f, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["edges"], serde_json::json!([[1, 3], [3, 4], [4, 5]]));
    let o = run(&["greedy", "--edges-file", &f]);
    assert!(stdout(&o).contains("K 2\n"));
    let o = run(&["count", "--edges-file", &f, "--ell", "2"]);
    assert!(stdout(&o).contains("count 3\n"), "{}", stdout(&o));
}

#[test]
fn rejects_bad_edge_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "5 2\n2 1\n").unwrap();
    let o = run(&["lmax", "--edges-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn usage_errors_exit_one_with_one_line() {
    for args in [
        &["expect", "--r", "3"][..],
        &["expect", "--r", "3", "--p", "0.5", "--bogus"],
        &["frobnicate"],
        &["expect", "--r", "3", "--p", "1.5"],
        &["predict", "--n", "10", "--r", "3"],
        &["predict", "--n", "10", "--r", "3", "--p-expr", "c*n^-1"],
        &["experiment", "--n", "10", "--r", "2", "--p", "0.5", "--trials", "0", "--measure", "lmax_exact"],
        &["experiment", "--n", "10", "--r", "2", "--p", "0.5", "--trials", "3", "--measure", "unit_Y"],
        &["count", "--n", "10", "--r", "2", "--p", "0.5", "--ell", "0"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(o.stdout.is_empty());
    }
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
}

#[test]
fn help_documents_units_and_results() {
    for sub in [
        "sample", "lmax", "greedy", "count", "unit", "expect", "predict", "ell0", "experiment", "poisson-test",
    ] {
        let o = run(&[sub, "--help"]);
        assert!(o.status.success());
        let out = stdout(&o);
        assert!(out.contains("edges") || out.contains("vertices"), "{sub}");
        if sub != "sample" {
            assert!(out.contains("T1."), "{sub}");
        }
    }
}

#[test]
fn bare_invocations_are_reproducible() {
    let a = run(&["sample", "--n", "30", "--r", "3", "--p", "0.1"]);
    let b = run(&["sample", "--n", "30", "--r", "3", "--p", "0.1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sample", "--n", "30", "--r", "3", "--p", "0.1", "--seed", "5"]);
    assert_ne!(a.stdout, c.stdout);
    let args = [
        "experiment", "--n", "40", "--r", "3", "--p", "0.1", "--trials", "30", "--measure", "lmax_exact", "--csv",
    ];
    let x = run(&args);
    assert_eq!(x.stdout, run(&args).stdout);
    let mut serial = args.to_vec();
    serial.extend(["--threads", "1"]);
    assert_eq!(x.stdout, run(&serial).stdout);
    assert_eq!(stdout(&x).lines().count(), 31);
}

#[test]
fn sampled_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    let p = path.to_str().unwrap();
    assert!(run(&["sample", "--n", "25", "--r", "2", "--p", "0.3", "--output", p]).status.success());
    let from_file = run(&["lmax", "--edges-file", p]);
    let direct = run(&["lmax", "--n", "25", "--r", "2", "--p", "0.3"]);
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("p ")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&from_file)), strip(stdout(&direct)));
}

#[test]
fn experiment_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    // spans of at most 1 almost never cover a sparse graph
    let o = run(&[
        "experiment", "--n", "50", "--r", "2", "--p", "0.1", "--trials", "5", "--measure", "min_extension(1)",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));

    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("report.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"n": 100000, "r": 3, "p": 0.3, "trials": 20, "backend": "unit", "measure": "unit_Y", "output": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = run(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 20);
    assert!(v["rng_id"].as_str().unwrap().contains("chacha8"));
    assert_eq!(v["checks"][0]["pass"], true);
}

#[test]
fn p_expressions_are_echoed() {
    let o = run(&["predict", "--n", "2000", "--r", "3", "--p-expr", "n^-2.42"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains(&format!("p {:e}", 2000f64.powf(-2.42))), "{out}");
    assert!(out.contains("T1.5-sparse(2)"));
    let o = run(&["ell0", "--n", "1000", "--r", "3", "--p-expr", "(10/n)^2.1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("l0 9.99999"), "{}", stdout(&o));
}

#[test]
fn unit_and_poisson_commands() {
    let o = run(&["unit", "--n", "7", "--r", "3", "--positions", "1,2,3,4,5"]);
    assert!(stdout(&o).contains("Y 3\npositions 1 3 5"));
    let o = run(&[
        "poisson-test", "--n", "500", "--r", "3", "--ell", "2", "--p-expr", "c*n^-2.5", "--c", "10.954451150103322",
        "--trials", "1000", "--tv-max", "0.15",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("lambda 1.0000"));
    let o = run(&["poisson-test", "--n", "500", "--r", "3", "--ell", "2", "--p", "0.001", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(1));
}
