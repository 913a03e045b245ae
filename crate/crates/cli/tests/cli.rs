use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn fuglede(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuglede"))
        .args(args)
        .env_remove("FUGLEDE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is JSON"))
        .collect()
}

#[test]
fn z3_5_counterexample_reports_obstruction() {
    let out = fuglede(&["--json", "counterexample", "z3-5"]);
    assert!(out.status.success());
    let report = &json_lines(&out)[0];
    assert_eq!(report["passed"], true);
    let checks = report["checks"].as_array().unwrap();
    let tiling = checks.iter().find(|c| c["name"] == "find_tiling").unwrap();
    assert_eq!(tiling["detail"]["divisibility_obstruction"]["set_size"], 6);
    assert_eq!(
        tiling["detail"]["divisibility_obstruction"]["group_order"],
        243
    );
    assert_eq!(report["artifacts"]["set"].as_array().unwrap().len(), 6);
}

#[test]
fn every_finite_variant_passes() {
    for v in ["z2-12", "z3-6", "z3-5", "z2-11"] {
        let out = fuglede(&["counterexample", v]);
        assert!(out.status.success(), "{v}: {}", stdout(&out));
        assert!(stdout(&out).contains("result: PASS"));
    }
}

#[test]
fn lattice_counterexample_at_m2() {
    let out = fuglede(&["--json", "counterexample", "lattice", "--m", "2"]);
    assert!(out.status.success());
    let report = &json_lines(&out)[0];
    let checks = report["checks"].as_array().unwrap();
    let by_name = |n: &str| checks.iter().find(|c| c["name"] == n).unwrap().clone();
    assert_eq!(by_name("build_omega1")["detail"]["points"], 192);
    assert_eq!(by_name("verify_ortho_lattice")["detail"]["pairs"], 18_336);
    assert_eq!(by_name("torus_non_tiling")["detail"]["group_order"], 7776);
}

#[test]
fn corrupted_matrix_names_verify_butson() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut logs: Vec<Vec<u32>> = serde_json::from_value(
        serde_json::to_value(fuglede_core::standard_h12()).unwrap()["logs"].clone(),
    )
    .unwrap();
    logs[3][5] ^= 1;
    fs::write(
        &path,
        serde_json::json!({ "q": 2, "logs": logs }).to_string(),
    )
    .unwrap();

    let out = fuglede(&[
        "counterexample",
        "z2-12",
        "--matrix",
        path.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stdout(&out).contains("FAIL (verify_butson)"));

    let out = fuglede(&[
        "--json",
        "counterexample",
        "z2-12",
        "--matrix",
        path.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let report = &json_lines(&out)[0];
    assert_eq!(report["passed"], false);
    assert_eq!(
        report["checks"].as_array().unwrap().last().unwrap()["name"],
        "verify_butson"
    );
}

#[test]
fn scan_reports_clean_small_groups() {
    for g in ["8", "2^4"] {
        let out = fuglede(&["--json", "scan", g]);
        assert!(out.status.success());
        let lines = json_lines(&out);
        let summary = &lines.last().unwrap()["summary"];
        assert_eq!(summary["complete"], true);
        assert_eq!(summary["spectral_non_tiles"], 0);
        assert_eq!(summary["tiles_non_spectral"], 0);
        assert_eq!(
            summary["classes"].as_u64().unwrap() as usize,
            lines.len() - 1
        );
    }
}

#[test]
fn scan_single_size_class() {
    let out = fuglede(&["--json", "scan", "4", "--size", "3"]);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["set"], serde_json::json!([[0], [1], [2]]));
    assert_eq!(lines[0]["spectral"], false);
    assert_eq!(lines[0]["tiles"], false);
}

#[test]
fn scan_budget_from_environment_marks_incomplete() {
    let out = Command::new(env!("CARGO_BIN_EXE_fuglede"))
        .args(["--json", "scan", "8"])
        .env("FUGLEDE_BUDGET", "0")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines.last().unwrap()["summary"]["complete"], false);

    // An explicit flag takes precedence over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_fuglede"))
        .args(["--json", "--budget", "1000000", "scan", "8"])
        .env("FUGLEDE_BUDGET", "0")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn scan_restricted_to_given_sets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sets.json");
    fs::write(&path, "[[1,2],[0,1,3]]").unwrap();
    let out = fuglede(&["--json", "scan", "6", "--set", path.to_str().unwrap()]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines[0]["set"], serde_json::json!([[0], [1]]));
    assert_eq!(lines[1]["tiles"], false);
    assert_eq!(lines[2]["summary"]["classes"], 2);
}

#[test]
fn verify_matrix_and_double_cover() {
    let out = fuglede(&["verify", "--matrix", "h12"]);
    assert!(out.status.success());

    let out = fuglede(&[
        "--json",
        "verify",
        "--group",
        "4",
        "--set",
        "{0,1}",
        "--complement",
        "{0,1}",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = &json_lines(&out)[0];
    let detail = &report["checks"][0]["detail"];
    assert_eq!(detail["verdict"], "invalid");
    assert_eq!(detail["witness"]["element"], serde_json::json!([1]));
    assert_eq!(detail["witness"]["multiplicity"], 2);

    let out = fuglede(&[
        "verify",
        "--group",
        "4",
        "--set",
        "{0,1}",
        "--complement",
        "{0,2}",
    ]);
    assert!(out.status.success());
}

#[test]
fn verify_z3_5_artifacts_from_files() {
    let out = fuglede(&["--json", "counterexample", "z3-5"]);
    let report = &json_lines(&out)[0];
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("s.json");
    let spectrum = dir.path().join("l.json");
    fs::write(&set, report["artifacts"]["set"].to_string()).unwrap();
    fs::write(&spectrum, report["artifacts"]["spectrum"].to_string()).unwrap();
    let out = fuglede(&[
        "verify",
        "--group",
        "3^5",
        "--set",
        set.to_str().unwrap(),
        "--spectrum",
        spectrum.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn errors_are_json_in_json_mode() {
    let out = fuglede(&[
        "--json",
        "verify",
        "--group",
        "4",
        "--set",
        "{0,9",
        "--spectrum",
        "{0,2}",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = &json_lines(&out)[0];
    assert_eq!(v["passed"], false);
    assert!(v["error"].as_str().unwrap().contains("line 1"));

    let out = fuglede(&["--json", "scan", "not-a-group"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json_lines(&out)[0]["error"].is_string());
}

#[test]
fn export_and_reverify_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(
        fuglede(&["export", "--m", "2", "--out", a.to_str().unwrap()])
            .status
            .success()
    );
    assert!(
        fuglede(&["export", "--m", "2", "--out", b.to_str().unwrap()])
            .status
            .success()
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let geometry: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(geometry["measure"], 192);

    let out = fuglede(&[
        "--json",
        "verify-continuum",
        "--geometry",
        a.to_str().unwrap(),
        "--k-radius",
        "0",
    ]);
    assert!(out.status.success());
    assert_eq!(
        json_lines(&out)[0]["checks"][1]["detail"]["verdict"]["pairs"],
        18_336
    );
}

#[test]
fn density_with_sampling_is_deterministic() {
    let args = [
        "--json", "density", "--m", "4", "--l", "6", "--trials", "200", "--seed", "7",
    ];
    let a = fuglede(&args);
    let b = fuglede(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["--json", "counterexample", "z2-11"];
    assert_eq!(fuglede(&args).stdout, fuglede(&args).stdout);
}
