//! End-to-end tests of the binary: exit codes, golden values, and the
//! byte-for-byte reproducibility of emitted reports.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermoshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thermoshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(name)
}

#[test]
fn analyze_paper4_emits_the_golden_analysis() {
    let out = run(&[
        "analyze",
        "--example",
        "paper4",
        "--ep",
        "0.2",
        "--eq",
        "0.3",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let analysis = &doc["analysis"];
    assert_eq!(analysis["m"], 2);
    assert_eq!(analysis["d"][0].as_f64().unwrap(), 0.2);
    assert_eq!(analysis["d"][1].as_f64().unwrap(), 0.3);
    assert!((analysis["p_delta"].as_f64().unwrap() - 0.5 * 0.06f64.ln()).abs() < 1e-12);
    assert!(analysis["pressure"].as_f64().unwrap().abs() < 1e-10);
    assert_eq!(analysis["converges_overall"], false);
}

#[test]
fn full_alphabet_delta_is_a_precondition_failure() {
    let out = run(&["analyze", "--example", "paper4", "--delta", "1,2,3"]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("proper subset"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn normalize_flag_accepts_arbitrary_potentials() {
    let path = temp_path("raw_model.json");
    let file = serde_json::json!({
        "alphabet": ["a", "b", "c"],
        "matrix": [[0, 1, 1], [1, 0, 1], [1, 1, 1]],
        "potential": {
            "order": 2,
            "entries": [
                {"word": ["a", "b"], "value": -0.25},
                {"word": ["a", "c"], "value": 0.5},
                {"word": ["b", "a"], "value": -1.5},
                {"word": ["b", "c"], "value": 0.75},
                {"word": ["c", "a"], "value": 0.1},
                {"word": ["c", "b"], "value": -0.4},
                {"word": ["c", "c"], "value": -2.0}
            ]
        },
        "normalize": true,
        "delta": ["a", "b"]
    });
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let out = run(&["analyze", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["analysis"]["pressure"].as_f64().unwrap().abs() < 1e-10);
    // the emitted model is the normalised one
    assert_eq!(doc["model"]["normalize"], false);
}

#[test]
fn unnormalized_potential_without_the_flag_is_rejected() {
    let path = temp_path("unnormalized.json");
    let file = serde_json::json!({
        "alphabet": ["a", "b"],
        "matrix": [[1, 1], [1, 1]],
        "potential": {
            "order": 2,
            "entries": [
                {"word": ["a", "a"], "value": 0.0},
                {"word": ["a", "b"], "value": 0.0},
                {"word": ["b", "a"], "value": 0.0},
                {"word": ["b", "b"], "value": 0.0}
            ]
        },
        "delta": ["a"]
    });
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = run(&["analyze", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("normalize"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn sequence_alternates_between_the_two_limits() {
    let out = run(&["sequence", "--example", "paper4", "--nmax", "40"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,mu_delta_n,scaled,residue,predicted,abs_error");
    assert_eq!(lines.len(), 42);
    let predicted: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    for (n, p) in predicted.iter().enumerate() {
        let expect = if n % 2 == 0 {
            125.0 / 78.0
        } else {
            (2.0f64 / 3.0).sqrt() * (5.0 / 6.0) + (3.0f64 / 2.0).sqrt() * (10.0 / 13.0)
        };
        assert!((p - expect).abs() < 1e-9, "row {n}");
    }

    let json_out = run(&[
        "sequence",
        "--example",
        "paper4",
        "--nmax",
        "40",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    assert_eq!(doc["sequence"]["converges_overall"], false);
    assert!((doc["analysis"]["spread"].as_f64().unwrap() - 0.0199612).abs() < 1e-7);
}

#[test]
fn equal_weights_converge_overall() {
    let out = run(&[
        "sequence",
        "--example",
        "paper4",
        "--ep",
        "0.25",
        "--eq",
        "0.25",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["sequence"]["converges_overall"], true);
    assert_eq!(doc["analysis"]["verdict"], "converges");
}

#[test]
fn aperiodic_variant_has_one_repeated_limit_and_decaying_error() {
    let out = run(&[
        "sequence",
        "--example",
        "paper4",
        "--delta",
        "1,3",
        "--nmax",
        "20",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    let first_predicted = &rows[0][4];
    for row in &rows {
        assert_eq!(&row[4], first_predicted, "single predicted value repeated");
        assert_eq!(row[3], "0", "single residue class");
    }
    let errs: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    for n in 1..errs.len() - 1 {
        if errs[n] > 1e-12 {
            assert!(
                errs[n + 1] <= errs[n] * 0.3 + 1e-12,
                "geometric decay at n={n}"
            );
        }
    }
}

#[test]
fn emitted_reports_reproduce_themselves_byte_for_byte() {
    let a_csv = temp_path("roundtrip_a.csv");
    let b_csv = temp_path("roundtrip_b.csv");
    let a_json = a_csv.with_extension("json");

    let first = run(&[
        "sequence",
        "--example",
        "paper4",
        "--nmax",
        "25",
        "--out",
        a_csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&first), 0, "stderr: {}", stderr(&first));

    let second = run(&[
        "sequence",
        "--model",
        a_json.to_str().unwrap(),
        "--nmax",
        "25",
        "--out",
        b_csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&second), 0, "stderr: {}", stderr(&second));

    let a = std::fs::read(&a_csv).unwrap();
    let b = std::fs::read(&b_csv).unwrap();
    assert_eq!(a, b, "re-ingested analysis reproduces the CSV exactly");

    // the analysis document itself is also accepted by analyze
    let third = run(&["analyze", "--model", a_json.to_str().unwrap()]);
    assert_eq!(code(&third), 0);
}

#[test]
fn verify_passes_on_the_built_in_example() {
    let out = run(&["verify", "--example", "paper4"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS normalized"));
    assert!(text.contains("all checks passed"));
}

#[test]
fn verify_catches_a_corrupted_potential_table() {
    // take the canonical model emitted by analyze and spoil one value
    let analysis = run(&["analyze", "--example", "paper4"]);
    let mut doc: serde_json::Value = serde_json::from_str(&stdout(&analysis)).unwrap();
    let entry = &mut doc["model"]["potential"]["entries"][0]["value"];
    *entry = serde_json::json!(entry.as_f64().unwrap() + 0.1);
    let path = temp_path("corrupted.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["verify", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("FAIL normalized"));
    assert!(stderr(&out).contains("worst residual"));
}

#[test]
fn zero_tolerance_is_rejected_with_guidance() {
    let out = run(&["verify", "--example", "paper4", "--tol", "0"]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("positive"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn parse_errors_exit_2() {
    let missing = run(&["analyze", "--model", "/nonexistent/model.json"]);
    assert_eq!(code(&missing), 2);

    let path = temp_path("invalid.json");
    std::fs::write(&path, "{ not json").unwrap();
    let invalid = run(&["analyze", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&invalid), 2);

    let out = run(&["analyze", "--example", "paper4", "--delta", "1,9"]);
    assert_eq!(code(&out), 2, "unknown label is a file/parse-level failure");

    let noinput = run(&["analyze"]);
    assert_eq!(code(&noinput), 2);
}

#[test]
fn example_weight_guard_is_a_precondition() {
    let out = run(&[
        "analyze",
        "--example",
        "paper4",
        "--ep",
        "0.6",
        "--eq",
        "0.5",
    ]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("ep + eq < 1"),
        "stderr: {}",
        stderr(&out)
    );
}
