use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use trilat::fixtures::PRINTED_TOLERANCE;
use trilat_cli::commands::{table_fixtures, TableName};
use trilat_cli::SolveReport;

fn trilat(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_trilat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

const FIVE_WAY: &str = r#"{"r": 2, "s": 3, "d": [7.0711, 7.0711, 6.3246]}"#;

#[test]
fn solve_round_trips() {
    let o = trilat(&["solve", "-"], Some(FIVE_WAY));
    assert_eq!(o.status.code(), Some(0));
    let report: SolveReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.schema, "trilat/1");
    assert_eq!(report.solutions.len(), report.multiplicity);
    let again = serde_json::to_value(&report).unwrap();
    assert_eq!(again, json(&o));
}

#[test]
fn tie_tolerance_changes_multiplicity() {
    let loose = json(&trilat(&["--tol", "1e-4", "solve", "-"], Some(FIVE_WAY)));
    assert_eq!(loose["multiplicity"], 5);
    let tight = json(&trilat(&["solve", "-"], Some(FIVE_WAY)));
    assert!(tight["multiplicity"].as_u64().unwrap() < 5);
    let bad = trilat(&["--tol", "2", "solve", "-"], Some(FIVE_WAY));
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn equilateral_centroid() {
    let text = r#"{"r": 2, "s": 1.7320508075688772, "d": [1, 1, 1]}"#;
    let o = json(&trilat(&["solve", "-"], Some(text)));
    assert_eq!(o["shape"], "Equilateral");
    assert_eq!(o["multiplicity"], 1);
    assert_eq!(o["solutions"][0]["role"], "Y0");
}

#[test]
fn oracle_check_agrees() {
    let text = r#"{"r": 2, "s": 3, "d": [7.0710678118654755, 7.0710678118654755, 6.324555320336759]}"#;
    let o = json(&trilat(&["solve", "--oracle-check", "-"], Some(text)));
    assert_eq!(o["multiplicity"], 5);
    assert_eq!(o["oracle_agreement"]["agrees"], true);
    let o = json(&trilat(&["oracle", "-"], Some(text)));
    assert!(o["minima"].as_array().unwrap().len() <= 5);
}

#[test]
fn exit_codes_and_error_channels() {
    let degenerate = r#"{"sensors": [[1, 1], [1, 1], [1, 1]], "d": [1, 1, 1]}"#;
    let o = trilat(&["solve", "-"], Some(degenerate));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "DegenerateTriangle");

    let o = trilat(&["--csv", "solve", "-"], Some(degenerate));
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["exit_code"], 2);

    let o = trilat(&["solve", "-"], Some("{not json"));
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["error"], "SchemaError");

    let o = trilat(&["solve", "/nonexistent/instance.json"], None);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["error"], "IoError");

    let o = trilat(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["error"], "UsageError");

    let o = trilat(&["--csv", "sweep", "--r", "2", "--s", "3", "--d1", "1:2", "--d3", "x"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());

    assert_eq!(trilat(&["--help"], None).status.code(), Some(0));
}

#[test]
fn table_csv_matches_fixtures() {
    for (name, arg) in [(TableName::Equilateral, "equilateral"), (TableName::Isosceles, "isosceles"), (TableName::LowerPair, "lower-pair")] {
        let o = trilat(&["--csv", "table", arg], None);
        assert_eq!(o.status.code(), Some(0));
        let fixtures = table_fixtures(name).unwrap();
        let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), fixtures.len(), "{arg}");
        for (row, f) in rows.iter().zip(&fixtures) {
            for k in 0..6 {
                let v: f64 = row[4 + k].parse().unwrap();
                assert!((v - f.values[k]).abs() <= PRINTED_TOLERANCE, "{arg} {}: {v} vs {}", f.label, f.values[k]);
            }
        }
    }
}

#[test]
fn sweep_and_contour_shapes() {
    let o = trilat(&["--csv", "sweep", "--r", "2", "--s", "3", "--d1", "1:8", "--d3", "1:8", "--steps", "7"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 49);
    assert!(text.lines().next().unwrap().starts_with("d1,d3,multiplicity"));

    let o = trilat(&["--csv", "contour", "--resolution", "5", "-"], Some(FIVE_WAY));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 25);
    for line in text.lines().skip(1) {
        let v: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(v >= 24.0 - 1e-3);
    }
}

#[test]
fn thresholds_report() {
    let o = json(&trilat(&["thresholds", "-"], Some(FIVE_WAY)));
    assert_eq!(o["apex"], 3);
    assert!(o["nearest_distance"].as_f64().unwrap() < 1e-3);
    let general = r#"{"sensors": [[0, 0], [3, 0], [1, 2]], "d": [1, 2, 3]}"#;
    assert_eq!(trilat(&["thresholds", "-"], Some(general)).status.code(), Some(1));
}
