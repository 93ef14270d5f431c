use std::path::{Path, PathBuf};
use std::process::Command;

use gamma_mirror::cli::{run, Outcome};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("gamma-mirror").chain(args.iter().copied()))
}

fn fixture_arg(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn copy_fixture(dir: &Path, name: &str) -> PathBuf {
    let dst = dir.join(name);
    std::fs::copy(fixtures().join(name), &dst).unwrap();
    dst
}

#[test]
fn empty_input_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.toml");
    std::fs::write(&path, "").unwrap();
    let out = cli(&["inspect", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("empty"), "{}", out.stderr);
}

#[test]
fn malformed_vertex_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "dimension = 2\nvertices = [[1, 0], [0, 1, 1], [-1, -1]]\n").unwrap();
    let out = cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("vertices[1]"), "{}", out.stderr);
}

#[test]
fn missing_file_is_an_io_error() {
    let out = cli(&["inspect", "/nonexistent/polytope.toml"]);
    assert_eq!(out.exit_code, 2);
}

#[test]
fn cube_fails_validation() {
    let out = cli(&["inspect", &fixture_arg("cube.toml")]);
    assert_eq!(out.exit_code, 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["validation"]["conditions"].is_array());

    let out = cli(&["verify", &fixture_arg("cube.toml")]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stderr.contains("smooth Fano"), "{}", out.stderr);
}

#[test]
fn verify_fixture_passes() {
    let out = cli(&["verify", &fixture_arg("p4_quintic.toml")]);
    assert_eq!(out.exit_code, 0, "{}", out.stdout);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["all_exact"], true);
    let ids: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"golden.period.3"));
    assert!(ids.contains(&"corollary.c2.J1"));
}

#[test]
fn tampered_golden_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let path = copy_fixture(dir.path(), "p4_quintic.toml");
    let text = std::fs::read_to_string(&path).unwrap().replace("3 = \"168168000\"", "3 = \"168168001\"");
    std::fs::write(&path, text).unwrap();
    let out = cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let bad: Vec<&serde_json::Value> =
        v["entries"].as_array().unwrap().iter().filter(|e| e["exact_match"] == false).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["id"], "golden.period.3");
}

#[test]
fn regenerated_goldens_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = copy_fixture(dir.path(), "p1xp1.json");
    let before = std::fs::read_to_string(&path).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gamma-mirror"))
        .args(["verify", path.to_str().unwrap(), "--regen-goldens"])
        .env_remove("CI")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), before);
    assert_eq!(cli(&["verify", path.to_str().unwrap()]).exit_code, 0);
}

#[test]
fn regen_refused_under_ci() {
    let dir = tempfile::tempdir().unwrap();
    let path = copy_fixture(dir.path(), "p2_cubic.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_gamma-mirror"))
        .args(["verify", path.to_str().unwrap(), "--regen-goldens"])
        .env("CI", "true")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CI"));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["verify".to_string(), fixture_arg("p2xp2_bicubic.toml")],
        vec!["period".to_string(), fixture_arg("blowup_p3.toml"), "--order".into(), "4".into()],
        vec!["inspect".to_string(), fixture_arg("p1x4.toml")],
    ] {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = cli(&a);
        assert_eq!(first.exit_code, 0, "{}", first.stderr);
        for _ in 0..2 {
            assert_eq!(cli(&a).stdout, first.stdout);
        }
    }
}

#[test]
fn standalone_gamma_polynomials() {
    let out = cli(&["gamma", "--standalone", "3", "--cy"]);
    assert_eq!(out.exit_code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["display"], serde_json::json!(["Q_2 = zeta2*c2", "Q_3 = zeta3*c3"]));

    let out = cli(&["--format", "table", "gamma", "--standalone", "1"]);
    assert_eq!(out.stdout, "s_1 = gamma\nQ_1 = gamma*c1\n");

    let out = cli(&["gamma", "--standalone", "3", &fixture_arg("p4_quintic.toml")]);
    assert_eq!(out.exit_code, 2);
}

#[test]
fn period_at_order_zero() {
    let out = cli(&["period", &fixture_arg("p4_quintic.toml"), "--order", "0"]);
    assert_eq!(out.exit_code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let terms = v["period_series"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coeff"], "1");
    assert!(out.stderr.contains("insufficient order"));
}

#[test]
fn grassmannian_table_rows() {
    let out = cli(&["--order", "10", "grassmannian"]);
    assert_eq!(out.exit_code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    assert_eq!(v["squared_candidate_matches"], true);
    assert_eq!(v["rows"][2]["ratio"], "5/2");
}

#[test]
fn digits_out_of_range_is_a_usage_error() {
    let out = cli(&["--digits", "5", "gamma", "--standalone", "2"]);
    assert_eq!(out.exit_code, 2);
}
