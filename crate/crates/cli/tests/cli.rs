//! End-to-end tests of the `hllab` binary: exit codes, JSON/CSV shapes,
//! exact-field round trips, and seeded determinism.

use std::process::{Command, Output};

use hllab_core::exponents::{xexp, XExp};

fn hllab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hllab")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_golden_and_round_trip() {
    let out = hllab(&["classify", "--p", "4", "--q", "4", "--a", "2", "--b", "2"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["admissible"], true);
    assert_eq!(doc["on_boundary"], true);
    assert_eq!(doc["failed_constraints"].as_array().unwrap().len(), 0);
    // Exact fields re-parse to equal exponents.
    let a: XExp = doc["a"].as_str().unwrap().parse().unwrap();
    assert_eq!(a, xexp("2"));

    let out = hllab(&["classify", "--p", "4", "--q", "4", "--a", "2", "--b", "199/100"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["admissible"], false);
    assert!(doc["failed_constraints"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c == "B_LOWER"));
}

#[test]
fn decimal_exponents_are_rejected() {
    let out = hllab(&["classify", "--p", "4", "--q", "4", "--a", "2", "--b", "1.9999"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("exact rational required"), "{stderr}");
}

#[test]
fn domain_errors_exit_2() {
    let out = hllab(&["classify", "--p", "3/2", "--q", "4", "--a", "2", "--b", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    // The uncovered region sliver reports rather than guessing.
    let out = hllab(&["region", "--p", "4", "--q", "4", "--r1", "5/4", "--r2", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn blowup_and_region_golden() {
    let out = hllab(&["blowup", "--p", "4", "--q", "4", "--r1", "1", "--r2", "8"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["region"], "R3");
    assert_eq!(doc["exponent"], "1/4");
    assert_eq!(doc["exponent_decimal"], 0.25);

    let out = hllab(&["region", "--p", "2", "--q", "4", "--r1", "1", "--r2", "2"]);
    assert_eq!(stdout_json(&out)["region"], "P2_FAIL");
}

#[test]
fn formula_commands_golden() {
    let out = hllab(&["rp", "--k", "2", "--p1", "1", "--p2", "4/3"]);
    assert_eq!(stdout_json(&out)["exponent"], "2");

    let out = hllab(&["inclusion", "--m", "2", "--r", "2", "--s", "1", "--u", "5/4"]);
    assert_eq!(stdout_json(&out)["exponent"], "10");

    let out = hllab(&["tuple", "--m", "3", "--p", "4"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["exponents"], serde_json::json!(["4", "2", "2"]));
    assert_eq!(doc["reciprocal_sum"], "5/4");
}

#[test]
fn boundary_table_exact_columns() {
    // a sampled at {4/3, 2, 8/3}: the a = 2 row carries b_min = 2 ("2/1").
    let out = hllab(&[
        "boundary", "--p", "4", "--q", "4", "--samples", "3", "--a-max", "8/3", "--csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,b_min,a_exact,b_min_exact");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].ends_with("4/3,4/1"), "{}", rows[0]);
    assert!(rows[1].ends_with("2/1,2/1"), "{}", rows[1]);

    // At p = q = inf the range starts at q* = 1 with smallest b = 2.
    let out = hllab(&[
        "boundary", "--p", "inf", "--q", "inf", "--samples", "4", "--a-max", "2", "--csv",
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with("1,2,"), "{first}");
    // The hyperbola passes through (4/3, 4/3).
    assert!(text.lines().any(|l| l.ends_with("4/3,4/3")), "{text}");

    let out = hllab(&["boundary", "--p", "4", "--q", "4", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn norm_command_reads_tensor_files() {
    let dir = std::env::temp_dir();
    let path = dir.join("hllab_cli_test_u2.json");
    std::fs::write(
        &path,
        r#"{"order": 2, "dims": [2, 2], "data": [1.0, 1.0, 0.0, 0.0], "domain_exps": ["4", "4"]}"#,
    )
    .unwrap();
    let out = hllab(&["norm", "--input", path.to_str().unwrap(), "--multistarts", "8"]);
    let doc = stdout_json(&out);
    let value = doc["value"].as_f64().unwrap();
    assert!((value - 2.0f64.powf(0.75)).abs() < 1e-9);
    assert_eq!(doc["method"], "ASCENT");

    // Exact enumeration needs all-inf domains.
    let out = hllab(&["norm", "--input", path.to_str().unwrap(), "--exact"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = dir.join("hllab_cli_test_bad.json");
    std::fs::write(&bad, r#"{"order": 2, "dims": [2, 2], "data": [1.0]}"#).unwrap();
    let out = hllab(&["norm", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweeps_are_bit_identical_per_seed() {
    let args = [
        "sweep", "--kind", "KSZ", "--p", "inf", "--q", "inf", "--r1", "1", "--r2", "1",
        "--n-range", "4..8", "--trials", "5", "--seed", "9", "--csv",
    ];
    let a = hllab(&args);
    let b = hllab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let mut other = args;
    other[other.len() - 2] = "10";
    let c = hllab(&other);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn thread_count_does_not_change_results() {
    let args = [
        "verify", "--m", "2", "--p", "5", "--n-range", "4..8", "--trials", "3", "--seed", "21",
    ];
    let run_with = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hllab"))
            .args(args)
            .env("HLLAB_THREADS", threads)
            .output()
            .expect("binary runs")
    };
    let one = run_with("1");
    let four = run_with("4");
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);

    let bad = run_with("zero");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_json_contains_rows_and_fit() {
    let out = hllab(&[
        "sweep", "--kind", "U", "--p", "4", "--q", "4", "--r1", "1", "--r2", "8",
        "--n-range", "8..64", "--geometric",
    ]);
    let doc = stdout_json(&out);
    let slope = doc["fit"]["slope"].as_f64().unwrap();
    assert!((slope - 0.25).abs() < 1e-10);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_reports_and_exits_cleanly() {
    let out = hllab(&[
        "verify", "--m", "2", "--p", "5", "--n-range", "4..6", "--trials", "2", "--seed", "3",
    ]);
    // Exit 0 only when nothing is inconclusive; 3 otherwise.
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let total = doc["total"].as_u64().unwrap();
    let verified = doc["verified"].as_u64().unwrap();
    let inconclusive = doc["inconclusive"].as_u64().unwrap();
    assert_eq!(total, verified + inconclusive);
    assert_eq!(out.status.code(), Some(if inconclusive > 0 { 3 } else { 0 }));

    let out = hllab(&["verify", "--m", "2", "--p", "4", "--n-range", "4..6"]);
    assert_eq!(out.status.code(), Some(2)); // p must exceed 2m
}

#[test]
fn ksz_broadcast_and_range_forms() {
    let out = hllab(&[
        "ksz", "--m", "2", "--p", "inf", "--n-range", "4..8", "--n-step", "2", "--trials", "3",
        "--csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 4); // header + n = 4, 6, 8

    let out = hllab(&["ksz", "--m", "3", "--p", "inf", "--p", "inf", "--n-range", "2..4"]);
    assert_eq!(out.status.code(), Some(2)); // 2 exponents for m = 3
}
