//! End-to-end tests of the `conecalc` binary: output records, exit codes,
//! cache transparency, and determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn conecalc(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conecalc"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("CONECALC_CACHE", dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("binary runs")
}

fn record(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON record")
}

#[test]
fn norm_reports_exact_value_and_decimal() {
    let out = conecalc(
        &["norm", "a b a' b'", "--alphabet", "a=1,b=1/3", "--witness"],
        None,
    );
    let rec = record(&out);
    assert_eq!(rec["value"], "2/3");
    assert_eq!(rec["decimal"], "0.666666666667");
    assert_eq!(rec["witness"]["removed_positions"], serde_json::json!([1, 3]));
}

#[test]
fn output_is_deterministic_across_runs_and_jobs() {
    let strip_time = |out: &Output| {
        let mut rec = record(out);
        rec.as_object_mut().unwrap().remove("time_ms");
        rec
    };
    let args = ["stable", "a b a b'", "--alphabet", "a,b", "--schedule", "1,2,4,8"];
    let first = strip_time(&conecalc(&args, None));
    let again = strip_time(&conecalc(&args, None));
    let parallel = {
        let mut a = args.to_vec();
        a.extend(["--jobs", "4"]);
        strip_time(&conecalc(&a, None))
    };
    assert_eq!(first, again);
    assert_eq!(first, parallel);
}

#[test]
fn cache_hits_do_not_change_values() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["stable", "a b", "--alphabet", "a,b", "--schedule", "1,2,4"];
    let cold = record(&conecalc(&args, Some(dir.path())));
    let warm = record(&conecalc(&args, Some(dir.path())));
    assert_eq!(cold["cache_hits"], 0);
    assert_eq!(warm["cache_hits"], 3);
    assert_eq!(cold["upper"], warm["upper"]);
    assert_eq!(cold["lower"], warm["lower"]);
    let uncached = record(&conecalc(&args, None));
    assert_eq!(uncached["upper"], warm["upper"]);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["norm", "a b", "--alphabet", "a,b"];
    let cold = record(&conecalc(&args, Some(dir.path())));
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), b"garbage").unwrap();
    }
    let rec = record(&conecalc(&args, Some(dir.path())));
    assert_eq!(rec["cache_hit"], false);
    assert_eq!(rec["value"], cold["value"]);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let out = conecalc(&["norm", "a b zz", "--alphabet", "a,b"], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1:5"), "stderr was: {err}");
}

#[test]
fn precondition_violations_exit_2() {
    let out = conecalc(&["collide", "--p1", "4,4", "--p2", "2,2,2,2", "--ell", "2"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn collide_reports_first_common_long_interval() {
    let out = conecalc(
        &["collide", "--p1", "6,6", "--p2", "4,4,4", "--ell", "2"],
        None,
    );
    let rec = record(&out);
    let lo = rec["interval"][0].as_u64().unwrap();
    let hi = rec["interval"][1].as_u64().unwrap();
    assert!(hi - lo + 1 >= 2);
}

#[test]
fn root_extracts_primitive_root_with_sign() {
    let rec = record(&conecalc(&["root", "a' a' a'", "--alphabet", "a,b"], None));
    assert_eq!(rec["theta"], "a");
    assert_eq!(rec["k"], -3);
}

#[test]
fn rnorm_matches_scaled_integer_norm() {
    let rec = record(&conecalc(
        &["rnorm", "a(1/2) b(1/2) a(-1/2) b(-1/2)", "--alphabet", "a,b"],
        None,
    ));
    assert_eq!(rec["value"], "1/1");
}

#[test]
fn max_len_cap_is_enforced() {
    let out = conecalc(
        &["norm", "a^50 b a^-50", "--alphabet", "a,b", "--max-len", "10"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}
