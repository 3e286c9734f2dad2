//! End-to-end runs of the `gmt-chains` binary on the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value as Json;

use gmt_chains::chain::cut::slice;
use gmt_chains::chain::AffineMap;
use gmt_chains::io::{parse_chain, print_chain};
use gmt_chains::rational::{q, qi};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmt-chains"))
        .args(args)
        .env("GMT_CHAINS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn boundary_of_triangle_is_three_edges() {
    let out = run(&["boundary", &fixture("tri.json")]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["dim"], 1);
    assert_eq!(doc["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn slice_matches_library_call() {
    let out = run(&["slice", &fixture("sq.json"), "--f", "1,0", "--y", "1/2"]);
    assert!(out.status.success());
    let from_cli = parse_chain(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let s = parse_chain(&std::fs::read_to_string(fixture("sq.json")).unwrap()).unwrap();
    let f = AffineMap::functional(vec![qi(1), qi(0)], qi(0)).unwrap();
    let direct = slice(&s, &f, &q(1, 2)).unwrap();
    assert_eq!(print_chain(&from_cli).unwrap(), print_chain(&direct).unwrap());
    assert!((direct.mass().mass - 1.0).abs() < 1e-12);
}

#[test]
fn flat_norm_of_square_loop_is_one() {
    let out = run(&["flatnorm", &fixture("loop.json")]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["schema"], "gmt-chains/flatnorm/v1");
    assert!((doc["value"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn integral_flat_norm_agrees_on_the_loop() {
    let out = run(&["flatnorm", "--integral", &fixture("loop.json")]);
    assert!(out.status.success());
    assert!((json_of(&out)["value"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn nonregular_level_exits_three_with_error_document() {
    let out = run(&["slice", &fixture("sq.json"), "--f", "1,0", "--y", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json_of(&out);
    assert_eq!(doc["schema"], "gmt-chains/error/v1");
    assert_eq!(doc["error"], "NonRegularValue");
    assert_eq!(doc["exit_code"], 3);
}

#[test]
fn unreadable_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["boundary", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"], "Parse");
    let missing = run(&["mass", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mass.json");
    let out = run(&["mass", &fixture("tri.json"), "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Json = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["mass"].as_f64().unwrap(), 0.5);
}

#[test]
fn every_command_runs_on_fixtures() {
    let cases: Vec<Vec<String>> = vec![
        vec!["push".into(), fixture("tri.json"), "--map".into(), fixture("lift.json")],
        vec!["push".into(), fixture("tri.json"), "--matrix".into(), "2,0;0,2".into()],
        vec!["cut".into(), fixture("sq.json"), "--f".into(), "1,1".into(), "--y".into(), "1/3".into()],
        vec!["product".into(), fixture("tri.json"), fixture("loop.json")],
        vec!["restrict".into(), fixture("sq.json"), "--vertices".into(), "0,1,2".into()],
        vec!["reduce-mod".into(), fixture("loop.json"), "--d".into(), "2".into()],
        vec!["constancy".into(), fixture("sq.json"), "--manifold".into(), fixture("square_manifold.json")],
        vec!["homotopy".into(), fixture("tri.json"), "--f".into(), fixture("embed.json"), "--g".into(), fixture("raise.json")],
        vec!["snf".into(), "--matrix".into(), "[[2,4,4],[-6,6,12],[10,-4,-16]]".into()],
        vec!["tensor-check".into(), "--orders".into(), "2,6".into(), "--d".into(), "4".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&refs);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        json_of(&out);
    }
}

#[test]
fn constancy_reports_the_coefficient() {
    let doc = json_of(&run(&["constancy", &fixture("sq.json"), "--manifold", &fixture("square_manifold.json")]));
    assert_eq!(doc["constant"], true);
    assert_eq!(doc["coefficient"], "1");
    let doc = json_of(&run(&["constancy", &fixture("half_disk.json"), "--manifold", &fixture("square_manifold.json")]));
    assert_eq!(doc["constant"], false);
    assert_eq!(doc["witness_face"], serde_json::json!([0, 2]));
}

#[test]
fn homotopy_identity_holds_for_prism() {
    let doc = json_of(&run(&["homotopy", &fixture("tri.json"), "--f", &fixture("embed.json"), "--g", &fixture("raise.json")]));
    assert_eq!(doc["identity_holds"], true);
    assert_eq!(doc["fill"]["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn snf_reports_invariant_factors() {
    let doc = json_of(&run(&["snf", "--matrix", "[[2,4,4],[-6,6,12],[10,-4,-16]]"]));
    assert_eq!(doc["diagonal"], serde_json::json!(["2", "6", "12"]));
    assert_eq!(doc["verified"], true);
}

#[test]
fn doubling_is_not_univalent_mod_two() {
    let out = run(&["tensor-check", "--hom", &fixture("doubling.json"), "--d", "2"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["univalent"], false);
    assert_eq!(doc["verdicts"][0]["kernel"]["group"], "Z/2");
}

#[test]
fn mobius_boundary_mod_two_is_the_rim() {
    let doc = json_of(&run(&["boundary", &fixture("mobius.json")]));
    let cells: Vec<Json> = doc["terms"].as_array().unwrap().iter().map(|t| t["cell"].clone()).collect();
    // Rim edges {i, i+2}; the interior edges {i, i+1} appear twice and cancel.
    let expected = serde_json::json!([[0, 2], [0, 3], [1, 3], [1, 4], [2, 4]]);
    assert_eq!(Json::Array(cells), expected);
}

fn without_timing(mut doc: Json) -> Json {
    doc.as_object_mut().unwrap().remove("elapsed_ms");
    doc
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let one = Command::new(env!("CARGO_BIN_EXE_gmt-chains"))
        .args(["verify", "boundary-squared", "--seed", "7", "--cases", "500"])
        .env("GMT_CHAINS_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_gmt-chains"))
        .args(["verify", "boundary-squared", "--seed", "7", "--cases", "500"])
        .env("GMT_CHAINS_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success() && four.status.success());
    let (a, b) = (without_timing(json_of(&one)), without_timing(json_of(&four)));
    assert_eq!(a, b);
    assert_eq!(a["passed"], 500);
}

#[test]
fn verify_named_suites_pass() {
    for suite in ["slice-identity", "rho-mono"] {
        let out = run(&["verify", suite, "--seed", "7", "--cases", "200"]);
        assert!(out.status.success(), "{suite}");
        assert_eq!(json_of(&out)["failed"], 0);
    }
}

#[test]
fn verify_unknown_suite_is_a_parse_error() {
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn fixtures_round_trip_bit_exactly() {
    for name in ["tri.json", "sq.json", "loop.json", "half_disk.json", "mobius.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(print_chain(&parse_chain(&text).unwrap()).unwrap(), text, "{name}");
    }
}

#[test]
fn every_emitted_schema_tag_has_a_schema_file() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas");
    for kind in [
        "chain", "affine-map", "manifold", "group-hom", "mass", "flatnorm", "cut", "constancy", "homotopy", "snf",
        "tensor-check", "error", "verification-report",
    ] {
        let path = root.join(format!("{kind}.v1.json"));
        let doc: Json = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(doc["$id"], format!("gmt-chains/{kind}/v1"));
    }
}
