//! End-to-end checks of the binary: output grammar, format parity, and
//! exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fenchel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .expect("utf8 stdout")
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn conjugate_emits_one_json_record_per_grid_point() {
    let out = run(&[
        "conjugate",
        "--dist",
        r#"{"dist":"gaussian","mu":0,"sigma":1}"#,
        "--x",
        "-1,1,2",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 3);
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid JSON");
        assert_eq!(v["op"], "conjugate");
    }
    assert!(lines[1].contains("\"value\":5.00000000000e-1"));
    assert!(lines[2].contains("\"value\":2.00000000000e0"));
    assert!(lines[0].contains("\"value\":"));
}

#[test]
fn lower_inverse_of_degenerate_law_prints_minus_inf() {
    let out = run(&[
        "inverse",
        "--which",
        "lower",
        "--dist",
        r#"{"dist":"pointmass","c":3}"#,
        "--u",
        "0",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].contains("\"value\":\"-inf\""), "got {}", lines[0]);
}

#[test]
fn bound_csv_rows_are_monotone_in_u() {
    let dir = std::env::temp_dir().join("fenchel-cli-test-bound");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("specs.json");
    std::fs::write(
        &path,
        r#"[{"dist":"gaussian","mu":0,"sigma":1},{"dist":"poisson","lambda":2}]"#,
    )
    .unwrap();
    let out = run(&[
        "bound",
        "--dists",
        path.to_str().unwrap(),
        "--u",
        "0.5,1,2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 4, "header plus three rows");
    let header: Vec<&str> = lines[0].split(',').collect();
    let total_col = header.iter().position(|c| *c == "total").unwrap();
    let mut prev = f64::NEG_INFINITY;
    for row in &lines[1..] {
        // The dists echo is a quoted field with embedded commas; split on
        // the closing quote first.
        let tail = row.rsplit('"').next().unwrap();
        let cells: Vec<&str> = tail.trim_start_matches(',').split(',').collect();
        let offset = header.len() - cells.len();
        let total: f64 = cells[total_col - offset].parse().unwrap();
        assert!(total >= prev, "totals not monotone: {row}");
        prev = total;
    }
}

#[test]
fn json_and_csv_runs_agree_numerically() {
    let args_common = [
        "conjugate",
        "--dist",
        r#"{"dist":"exponential","rate":2}"#,
        "--x",
        "0:3:7",
    ];
    let json = run(&args_common);
    let mut csv_args = args_common.to_vec();
    csv_args.extend_from_slice(&["--format", "csv"]);
    let csv = run(&csv_args);
    assert!(json.status.success() && csv.status.success());
    let json_lines = stdout_lines(&json);
    let csv_lines = stdout_lines(&csv);
    assert_eq!(json_lines.len() + 1, csv_lines.len());
    for (j, c) in json_lines.iter().zip(&csv_lines[1..]) {
        let v: serde_json::Value = serde_json::from_str(j).unwrap();
        let x_token = match &v["x"] {
            serde_json::Value::Number(n) => format!("{:.11e}", n.as_f64().unwrap()),
            serde_json::Value::String(s) => s.clone(),
            other => panic!("unexpected x {other:?}"),
        };
        assert!(c.contains(&x_token), "csv row {c} missing {x_token}");
        let value_token = match &v["value"] {
            serde_json::Value::Number(n) => format!("{:.11e}", n.as_f64().unwrap()),
            serde_json::Value::String(s) => s.clone(),
            other => panic!("unexpected value {other:?}"),
        };
        assert!(
            c.contains(&value_token),
            "csv row {c} missing {value_token}"
        );
    }
}

#[test]
fn convolve_accepts_power_specs() {
    let dir = std::env::temp_dir().join("fenchel-cli-test-convolve");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("powers.json");
    std::fs::write(
        &path,
        r#"[{"dist":"power","r":2,"a":1},{"dist":"power","r":2,"a":2}]"#,
    )
    .unwrap();
    let out = run(&["convolve", "--dists", path.to_str().unwrap(), "--t", "1"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert!(
        lines[0].contains("\"value\":9.00000000000e0"),
        "got {}",
        lines[0]
    );
}

#[test]
fn verify_reports_pass_on_a_small_run() {
    let dir = std::env::temp_dir().join("fenchel-cli-test-verify");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("specs.json");
    std::fs::write(&path, r#"[{"dist":"bernoulli","p":0.5}]"#).unwrap();
    let out = run(&[
        "verify",
        "--dists",
        path.to_str().unwrap(),
        "--u",
        "1",
        "--samples",
        "20000",
        "--seed",
        "42",
        "--event",
        "weak",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    let v: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["event"], "weak");
    assert_eq!(v["n_samples"], 20000);
}

#[test]
fn invalid_specs_exit_2() {
    // Unknown key.
    let out = run(&[
        "conjugate",
        "--dist",
        r#"{"dist":"gaussian","mu":0,"sigma":1,"skew":3}"#,
        "--x",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Parameter out of range.
    let out = run(&[
        "conjugate",
        "--dist",
        r#"{"dist":"bernoulli","p":1.5}"#,
        "--x",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // A spec that is +inf everywhere.
    let out = run(&[
        "conjugate",
        "--dist",
        r#"{"dist":"tabulated","nodes":[[0.5,"inf"],[1.0,"inf"]]}"#,
        "--x",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed grid.
    let out = run(&[
        "conjugate",
        "--dist",
        r#"{"dist":"gaussian","mu":0,"sigma":1}"#,
        "--x",
        "1:2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Missing specs file.
    let out = run(&["bound", "--dists", "/nonexistent/specs.json", "--u", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn profile_reports_landmarks() {
    let out = run(&["profile", "--dist", r#"{"dist":"pointmass","c":0}"#]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_lines(&out)[0]).expect("valid JSON");
    assert_eq!(v["dom_case"], "closed");
    assert_eq!(v["x_inf"].as_f64().unwrap(), 0.0);
}
