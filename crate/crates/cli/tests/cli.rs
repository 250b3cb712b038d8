use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lfun_core::evaluator::l_eval;
use lfun_core::{EvalConfig, FormDescriptor};
use num_complex::Complex64;

fn lfun(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfun"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn coeffs_first_rows_and_rerun_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let o = lfun(dir.path(), &["coeffs", "--N", "10", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("a(1) = 1\na(2) = -6\n"));
    let first = fs::read(dir.path().join("o/coefficients.csv")).unwrap();
    assert!(String::from_utf8_lossy(&first).starts_with("n,a\n1,1\n2,-6\n"));
    assert_eq!(String::from_utf8_lossy(&first).lines().count(), 11);

    let o = lfun(dir.path(), &["coeffs", "--N", "10", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(dir.path().join("o/coefficients.csv")).unwrap(), first);
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["coeffs", "--N", "0"][..],
        &["frobnicate"],
        &["eval"],
        &["eval", "--s", "two"],
        &["zeros", "--workers", "0"],
        &["zeros", "--k", "3"],
        &["zeros", "--form", "mine.csv"],
        &["weyl", "--T", "abc"],
    ] {
        let o = lfun(dir.path(), args);
        assert_eq!(o.status.code(), Some(64), "{args:?}: {}", stderr(&o));
    }
    assert!(!dir.path().join("lfun-out").exists());
    assert_eq!(lfun(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = lfun(dir.path(), &["zeros", "--config", "missing.conf"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lfun(dir.path(), &["eval", "--s", "4", "--form", "nope.csv", "--k", "4", "--ell", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let o = lfun(dir.path(), &["eval", "--s", "2.25+10i"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let got = Complex64::new(
        v["value"]["re"].as_f64().unwrap(),
        v["value"]["im"].as_f64().unwrap(),
    );
    let g = FormDescriptor::g_default().unwrap();
    let want = l_eval(&g, Complex64::new(2.25, 10.0), &EvalConfig::default()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.conf"), "s = 6+1i\nroute = direct\n").unwrap();
    let o = lfun(dir.path(), &["eval", "--config", "run.conf", "--s", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["s"]["re"].as_f64(), Some(7.0));
    assert_eq!(v["route"].as_str(), Some("direct"));
}

#[test]
fn zeros_are_cached_and_extended() {
    let dir = tempfile::tempdir().unwrap();
    let o = lfun(dir.path(), &["zeros", "--T", "50", "--cache", "c", "--out", "a"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stderr(&o).contains("reused"));
    let o = lfun(dir.path(), &["zeros", "--T", "100", "--cache", "c", "--out", "b"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("reused N=29 zeros"), "{}", stderr(&o));
    let db = fs::read_to_string(dir.path().join("b/zeros.csv")).unwrap();
    let zs = lfun_core::zeros::parse_zeros(&db).unwrap();
    assert!(zs.is_complete() && zs.t_max >= 100.0);
    assert_eq!(zs.count_below(100.0), 80);

    // A damaged cache is rejected and rebuilt.
    let cached = dir.path().join("c/g-k4-l0/zeros.csv");
    let text = fs::read_to_string(&cached).unwrap().replacen("on-line", "off-line", 1);
    fs::write(&cached, text).unwrap();
    let o = lfun(dir.path(), &["zeros", "--T", "20", "--cache", "c", "--out", "d"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("checksum"), "{}", stderr(&o));
    assert!(!stderr(&o).contains("reused"));
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    for (w, out) in [("1", "w1"), ("3", "w3")] {
        let cache = format!("c{w}");
        let o = lfun(
            dir.path(),
            &["report", "--T", "30", "--workers", w, "--cache", &cache, "--out", out],
        );
        assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stderr(&o));
    }
    for f in ["report.jsonl", "zeros.csv", "weyl.csv", "landau.csv", "meansq.csv", "density.csv"] {
        let a = fs::read(dir.path().join("w1").join(f)).unwrap();
        let b = fs::read(dir.path().join("w3").join(f)).unwrap();
        assert!(a == b, "{f} differs between worker counts");
    }
}

#[test]
fn report_contains_functional_equation_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = lfun(dir.path(), &["report", "--T", "50", "--out", "r", "--cache", "c"]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("r/report.jsonl")).unwrap();
    let reports: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let fe = reports
        .iter()
        .find(|r| r["metric"] == "functional_equation_residual")
        .expect("functional equation metric present");
    assert_eq!(fe["verdict"], "pass");
    assert!(reports.iter().all(|r| r["eval_config"].is_object()));
    let fails = reports.iter().any(|r| r["verdict"] == "fail");
    assert_eq!(o.status.code(), Some(if fails { 1 } else { 0 }));
    for f in ["zeros.csv", "weyl.csv", "histogram.csv", "landau.csv", "meansq.csv", "density.csv"] {
        assert!(dir.path().join("r").join(f).exists(), "{f} missing");
    }
    assert_eq!(
        fs::read_to_string(dir.path().join("r/landau.csv")).unwrap().lines().count(),
        5
    );
}
