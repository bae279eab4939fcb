use std::process::{Command, Output};

use serde_json::Value;

fn pluecker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pluecker")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = pluecker(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr));
    });
    (out.status.code().expect("exit code"), json)
}

#[test]
fn space_info_counts() {
    let (code, r) = report(&["space-info", "-n", "3", "-p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "PASS");
    let w = &r["witnesses"];
    assert_eq!((w["points"].as_u64(), w["lines"].as_u64(), w["star"].as_u64()), (Some(8), Some(28), Some(7)));

    let (_, r) = report(&["space-info", "-n", "3", "-p", "3"]);
    let w = &r["witnesses"];
    assert_eq!((w["points"].as_u64(), w["lines"].as_u64(), w["star"].as_u64()), (Some(27), Some(117), Some(13)));
    assert_eq!(w["pencil"], 4);
    assert_eq!(w["quotient"]["points"], 13);
}

#[test]
fn space_info_rejects_bad_parameters() {
    let (code, r) = report(&["space-info", "-n", "0", "-p", "2"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "ERROR");
    assert_eq!(r["witnesses"]["error"], "ParameterError");
    let (code, r) = report(&["space-info", "-n", "2", "-p", "4"]);
    assert_eq!(code, 2);
    assert_eq!(r["witnesses"]["error"], "ParameterError");
}

#[test]
fn field_degree_flag() {
    let (code, r) = report(&["space-info", "-n", "2", "-p", "2", "-h", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"]["points"], 16);
    assert_eq!(r["witnesses"]["field"], "GF(4); modulus=[1,1,1]");
}

#[test]
fn round_trip_claim() {
    let (code, r) = report(&["verify", "theorem1", "-n", "3", "-p", "3", "--trials", "100", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "PASS");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["witnesses"]["round_trips"], 100);
    assert_eq!(r["witnesses"]["trials"], 100);
}

#[test]
fn round_trip_claim_needs_dimension_three() {
    let (code, r) = report(&["verify", "theorem1", "-n", "2", "-p", "3"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "ERROR");
    assert_eq!(r["witnesses"]["error"], "DimensionError");
}

#[test]
fn plucker_group_of_ag32() {
    let (code, r) = report(&["verify", "plucker-group", "-n", "3", "-p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"]["graph_order"], 40320);
    assert_eq!(r["witnesses"]["collineation_count"], 40320);
}

#[test]
fn other_claims_pass() {
    for args in [
        &["verify", "theorem2", "-n", "3", "-p", "2"][..],
        &["verify", "theorem3", "-n", "3", "-p", "2", "--trials", "5"],
        &["verify", "theorem4-count"],
        &["verify", "stars", "-n", "2", "-p", "3"],
        &["verify", "cliques", "-n", "3", "-p", "2"],
        &["verify", "plane-order", "-n", "2", "-p", "3", "-N", "2", "-P", "3"],
        &["verify", "plane-order", "-n", "2", "-p", "2", "-N", "2", "-P", "3"],
    ] {
        let (code, r) = report(args);
        assert_eq!(code, 0, "{args:?}: {r}");
        assert_eq!(r["status"], "PASS");
    }
}

#[test]
fn clique_report_format() {
    let (_, r) = report(&["verify", "cliques", "-n", "2", "-p", "2"]);
    let cliques = r["witnesses"]["cliques"].as_array().unwrap();
    assert_eq!(cliques.len(), 8);
    for c in cliques {
        let kind = c["type"].as_str().unwrap();
        assert!(kind == "star" || kind == "nonstar");
        assert_eq!(c["lines"].as_array().unwrap().len(), 3);
        assert_eq!(c["center"].is_null(), kind == "nonstar");
        assert_eq!(c["plane"].is_null(), kind == "star");
    }
}

#[test]
fn unknown_claim_is_a_usage_error() {
    let out = pluecker(&["verify", "theorem9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn transposition_counterexample() {
    let (code, r) = report(&["counterexample", "plane-transposition", "-n", "2", "-p", "3"]);
    assert_eq!(code, 0);
    let w = &r["witnesses"];
    assert_eq!(w["isomorphism"], true);
    assert_eq!(w["reconstruction"]["error"], "WellDefinednessViolation");
    assert_eq!(w["map"]["map"].as_array().unwrap().len(), 12);

    let (code, r) = report(&["counterexample", "plane-transposition", "-n", "3", "-p", "2"]);
    assert_eq!(code, 2);
    assert_eq!(r["witnesses"]["error"], "DimensionError");
}

#[test]
fn nonstar_clique_counterexample() {
    let (code, r) = report(&["counterexample", "nonstar-clique", "-n", "3", "-p", "2"]);
    assert_eq!(code, 0);
    let w = &r["witnesses"];
    assert_eq!(w["size"], 3);
    assert_eq!(w["maximal"], true);
    assert_eq!(w["star"], false);
}

#[test]
fn scramble_counterexample() {
    let (code, r) = report(&["counterexample", "plane-scramble", "-n", "2", "-p", "2", "-h", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"]["reconstruction"]["error"], "WellDefinednessViolation");
}

#[test]
fn text_format_and_out_file() {
    let out = pluecker(&["verify", "stars", "-n", "3", "-p", "2", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("claim: stars\ninstance: AG(3, 2)\nstatus: PASS\n"), "{text}");

    let dir = std::env::temp_dir().join(format!("pluecker-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = pluecker(&["verify", "stars", "-n", "3", "-p", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["claim"], "stars");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn timing_is_opt_in() {
    let (_, r) = report(&["verify", "theorem4-count"]);
    assert!(r.get("elapsed_ms").is_none());
    let (_, r) = report(&["verify", "theorem4-count", "--timing"]);
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn map_files_round_trip_through_check_map() {
    let (_, r) = report(&["counterexample", "plane-transposition", "-n", "2", "-p", "2"]);
    let dir = std::env::temp_dir().join(format!("pluecker-map-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.json");
    std::fs::write(&path, r["witnesses"]["map"].to_string()).unwrap();
    let (code, c) = report(&["check-map", "--map", path.to_str().unwrap()]);
    // planes are below the reconstruction dimension
    assert_eq!(code, 1);
    assert_eq!(c["witnesses"]["isomorphism"]["via_related"], true);
    assert_eq!(c["witnesses"]["reconstruction"]["error"], "DimensionError");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn graph_export() {
    let out = pluecker(&["graph", "-n", "2", "-p", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.split_whitespace().count() == 5));

    let out = pluecker(&["graph", "-n", "3", "-p", "2", "--cliques"]);
    let cliques: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cliques.as_array().unwrap().len(), 64);
}

#[test]
fn vertex_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pluecker"))
        .args(["verify", "cliques", "-n", "3", "-p", "2"])
        .env("PLUECKER_MAX_VERTICES", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["witnesses"]["error"], "BoundExceeded");
}
