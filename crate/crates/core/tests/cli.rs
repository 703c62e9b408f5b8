use std::process::Command;

use serde_json::Value;

fn tautrel(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tautrel")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = tautrel(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn series_json_carries_metadata() {
    let (code, v) = json(&["series", "--name", "A", "--order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "series");
    assert_eq!(v["seed"], 1);
    assert!(v["wall_time_ms"].is_number());
    assert_eq!(v["result"]["coeffs"][0], "1");
    assert_eq!(v["result"]["coeffs"][1], "5/24");
}

#[test]
fn fz_prints_relation() {
    let (code, out, _) = tautrel(&["fz", "--g", "3", "--r", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("1800*k1^2 - 25920*k2"), "{out}");
}

#[test]
fn invalid_relation_reports_validity() {
    let (code, _, err) = tautrel(&["fz", "--g", "4", "--r", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("validity"), "{err}");
}

#[test]
fn unstable_type_exits_two() {
    let (code, _, err) = tautrel(&["strata", "enumerate", "--g", "0", "--n", "2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(tautrel(&["series", "--name", "A", "--order", "x"]).0, 2);
    assert_eq!(tautrel(&["frobenius", "r-matrix", "--model", "p2"]).0, 2);
    assert_eq!(tautrel(&["--help"]).0, 0);
}

#[test]
fn closed_bracket() {
    let (code, v) = json(&["descendents", "closed", "--ks", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["value"], "1/24");
}

#[test]
fn census_verification_passes() {
    let (code, v) = json(&["verify", "strata"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 5);
}

#[test]
fn three_spin_verification_reports_sign() {
    let (code, v) = json(&["verify", "flatness", "--model", "3spin", "--order", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert_eq!(failed.len(), 2);
    assert_eq!(failed[0]["mismatch"]["computed"], "-7/144");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("tautrel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("graphs.csv");
    let (code, _, _) =
        tautrel(&["strata", "enumerate", "--g", "1", "--n", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with('#'));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}
