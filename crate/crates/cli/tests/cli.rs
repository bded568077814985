use std::process::Command;

use serde_json::Value;
use skein_cli::run_args;
use skein_core::curves::{classify, CurveExpansion};
use skein_core::freealg::{parse_free, presentation, PresentationId, SkeinElem};

fn skein(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_skein")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["skein"];
    full.extend_from_slice(args);
    serde_json::from_str(&run_args(full).unwrap().body).unwrap()
}

#[test]
fn expression_grammar() {
    let sys = presentation(PresentationId::Ry022FourGen);
    assert_eq!(parse_free("b*a", sys.alphabet()).unwrap(), SkeinElem::word(vec![1, 0]));
    let correction = sys.parse("v1^-1*v2^-1*(A - A^-1)*(g2 - g1)").unwrap();
    assert_eq!(&sys.parse("a*b").unwrap() - &sys.parse("b*a").unwrap(), correction);
    assert_eq!(sys.parse("a + b*a^2").unwrap(), sys.parse("a + (b*(a^2))").unwrap());
}

#[test]
fn reduce_command() {
    let doc = json(&["reduce", "--presentation", "ry022-3gen", "--expr", "b*a*g"]);
    let sys = presentation(PresentationId::Ry022ThreeGen);
    let want = sys.parse("b*a*g").unwrap().display(sys.names()).to_string();
    assert_eq!(doc["normal_form"], want.as_str());
    assert!(want.contains("v1^-1*v2^-1"));
}

#[test]
fn curve_atoms_in_pts() {
    let doc = json(&["pts", "--expr", "C(1,1)"]);
    let value: CurveExpansion = serde_json::from_value(doc["value"].clone()).unwrap();
    assert_eq!(value, CurveExpansion::curve(classify(1, 1).unwrap()));
    let doc = json(&["pts", "--expr", "C(1,0)*C(3,2)"]);
    assert_eq!(doc["closed_form"], "one-p-two");
}

#[test]
fn exit_codes() {
    assert_eq!(skein(&["confluence", "--presentation", "ry022-4gen"]).0, 0);
    assert_eq!(skein(&["reduce", "--expr", "C(1,1)"]).0, 2);
    assert_eq!(skein(&["reduce", "--expr", "a*"]).0, 2);
    assert_eq!(skein(&["reduce", "--expr", "a", "--presentation", "nowhere"]).0, 2);
    assert_eq!(skein(&["frobnicate"]).0, 2);
    assert_eq!(skein(&["discrepancy", "--expr", "[1,2]"]).0, 2);
    assert_eq!(skein(&["reps", "sample", "--n", "4"]).0, 2);
    assert_eq!(skein(&["reps", "verify", "--n", "3", "--seed", "1"]).0, 0);
}

#[test]
fn confluence_report() {
    let doc = json(&["confluence"]);
    assert_eq!(doc["confluent"], true);
    assert_eq!(doc["systems"].as_array().unwrap().len(), 5);
}

#[test]
fn discrepancy_checks_agree() {
    let doc = json(&["discrepancy", "--expr", "[[3,0],[0,1]]"]);
    let methods: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["closed", "recursion"]);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["agrees"] == true));
}

#[test]
fn positivity_verdict_matrix() {
    let (code, csv) = skein(&["positivity", "--max-index", "2", "--coords", "raw", "--format", "csv"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = csv.lines().collect();
    let curves = skein_core::pts::canonical_curves(2).len();
    assert_eq!(rows.len(), curves + 1);
    assert!(rows[1..].iter().all(|r| r.matches(',').count() == curves + 1));
    assert!(csv.contains("negative"));
    let (_, grouped) = skein(&["positivity", "--max-index", "2", "--format", "csv"]);
    assert!(!grouped.contains("negative"));
}

#[test]
fn reps_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("skein-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let shadow = dir.join("shadow.json");
    let (code, _) = skein(&["reps", "sample", "--n", "5", "--seed", "4", "--out", shadow.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out) = skein(&["reps", "verify", "--input", shadow.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(doc["relations"][0]["residual"].is_string());
    assert_eq!(doc["other_sqrt"]["equivalent"], false);
    std::fs::remove_dir_all(&dir).unwrap();
}
