use std::process::{Command, Output};

use serde_json::Value;

fn hsol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsol"))
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = hsol(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn group_order_example() {
    let r = report(&["group", "order", "--n", "1", "--k", "2"]);
    assert_eq!(r["result"]["order"], 8);
    assert_eq!(r["result"]["group"]["k"], 2);
    assert_eq!(r["command"], "group order");
    assert_eq!(r["holds"], true);
}

#[test]
fn radic_abs_example() {
    let r = report(&["radic", "abs", "--a", "12", "--r", "2"]);
    assert_eq!(r["result"]["abs"], "1/4");
}

#[test]
fn solenoid_preimage_example() {
    let r = report(&["solenoid", "preimages", "--n", "1", "--r", "2"]);
    assert_eq!(r["result"]["count"], 16);
    let r = report(&["solenoid", "preimages", "--n", "1", "--r", "3"]);
    assert_eq!(r["result"]["count"], 81);
}

#[test]
fn group_structure_commands() {
    let r = report(&["group", "center", "--n", "1", "--k", "3", "--depth", "3"]);
    assert_eq!(r["result"]["quotient_order"], 3);
    let r = report(&["group", "commutator", "--n", "2", "--k", "3"]);
    assert_eq!(r["result"]["equals_center"], true);
    let r = report(&["group", "index", "--n", "1", "--r", "3"]);
    assert_eq!(r["result"]["indices"]["scaled"], 27);
    assert_eq!(r["result"]["indices"]["dilated"], 81);
    let r = report(&["group", "normal", "--n", "1", "--r", "2"]);
    assert_eq!(r["result"]["scaled_normal"], true);
    assert_eq!(r["result"]["dilated_normal"], false);
    assert_eq!(r["result"]["dilated_normal_in_scaled"], true);
    let r = report(&["group", "closure", "--n", "1", "--r", "2"]);
    assert_eq!(r["result"]["equals_scaled_image"], true);
}

#[test]
fn heis_over_several_rings() {
    let r = report(&["heis", "compose", "--point", "1,2,3", "--other", "4,5,6"]);
    assert_eq!(r["result"]["point"]["t"], "14");
    let r = report(&["heis", "conjugate", "--point", "1,0,0", "--other", "0,1,0"]);
    assert_eq!(r["result"]["point"]["t"], "-1");
    let r = report(&["heis", "inverse", "--point", "1,1,0", "--ring", "residue", "--k", "5"]);
    assert_eq!(r["result"]["point"]["t"], "1");
    let r = report(&["heis", "dilate", "--point", "1,2,3", "--ring", "rational", "--factor", "1/2"]);
    assert_eq!(r["result"]["point"]["t"], "3/4");
    let r = report(&["heis", "compose", "--point", "1,1,1", "--other", "1,1,1", "--ring", "radic", "--r", "2", "--L", "2"]);
    assert_eq!(r["result"]["point"]["t"], "3");
}

#[test]
fn radic_and_profinite_commands() {
    let r = report(&["radic", "mul", "--a", "3", "--b", "5", "--r", "2", "--L", "3"]);
    assert_eq!(r["result"]["digit"], "7");
    let r = report(&["radic", "coherent", "--values", "1,2", "--r", "2"]);
    assert_eq!(r["result"]["coherent"], false);
    let r = report(&["profinite", "embed", "--point", "1,2,3", "--r", "2", "--L", "3"]);
    assert_eq!(r["result"]["coherent"], true);
    let element = r["result"]["element"].to_string();
    let r = report(&["profinite", "convert", "--input", &element]);
    assert_eq!(r["result"]["round_trip"], true);
}

#[test]
fn solenoid_identification() {
    let r = report(&["solenoid", "identify", "--point", "1/2,1/3,5", "--r", "2", "--L", "2"]);
    assert_eq!(r["result"]["consistent"], true);
}

#[test]
fn numerical_reports_carry_seed_and_runtime() {
    let r = report(&["ccdist", "--point", "1,0,0", "--m", "16", "--restarts", "2", "--seed", "7"]);
    let d = r["result"]["distance"].as_f64().unwrap();
    assert!((d - 1.0).abs() < 0.01, "{d}");
    assert_eq!(r["provenance"]["seed"], 7);
    assert!(r["provenance"]["runtime_ms"].is_u64());
    let r = report(&["volume", "--n", "1", "--samples", "20000"]);
    assert_eq!(r["result"]["expected_exponent"], 4);
}

#[test]
fn exact_reports_are_reproducible() {
    let a = hsol(&["group", "normal", "--n", "1", "--r", "3"]);
    let b = hsol(&["group", "normal", "--n", "1", "--r", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failed_property_exits_one() {
    // A tolerance of zero cannot be met by a Monte Carlo exponent.
    let out = hsol(&["volume", "--samples", "1000", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["holds"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hsol(&["verify", "--scope", "nope"]).status.code(), Some(2));
    assert_eq!(hsol(&["heis", "compose", "--point", "1,2"]).status.code(), Some(2));
    assert_eq!(hsol(&["group", "order"]).status.code(), Some(2));
    assert_eq!(hsol(&["radic", "abs", "--a", "3", "--r", "1"]).status.code(), Some(2));
    assert_eq!(hsol(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_scope_passes() {
    let r = report(&["verify", "--scope", "heisenberg_core"]);
    assert_eq!(r["holds"], true);
    assert!(!r["result"]["checks"].as_array().unwrap().is_empty());
}
