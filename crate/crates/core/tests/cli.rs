//! The binary end to end: exit codes, JSON envelope, determinism, seeding.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_torus-forms"));
    cmd.args(args);
    match seed_env {
        Some(s) => cmd.env("TORUS_FORMS_SEED", s),
        None => cmd.env_remove("TORUS_FORMS_SEED"),
    };
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn coinv_matches_prediction() {
    let out = run(&["coinv", "--sign", "+", "--n", "3", "--g", "3", "--window", "4", "--json"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "torus-forms/1");
    assert_eq!(v["pass"], true);
    let r = &v["result"];
    assert_eq!(r["computed"], r["predicted"]);
    assert_eq!(r["match"], true);
    assert_eq!(r["h_coinvariants"], "0");
    assert_eq!(r["witness"].as_array().unwrap().len(), 5);

    let text = run(&["coinv", "--sign", "-", "--n", "3"], None);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("match:     true"));
}

#[test]
fn omega_check_on_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("identity.json");
    std::fs::write(&path, torus_forms::BlockMatrix::identity(2).to_json()).unwrap();
    let out = run(&["omega-check", "--n", "4", "--g", "2", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["defect_zero"], true);
    assert_eq!(v["result"]["conditions_pass"], true);
    assert_eq!(v["result"]["agree"], true);
}

#[test]
fn unitary_check_reports_failed_condition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shear.json");
    let mut m = torus_forms::PolyMatrix::identity(4);
    m.set(0, 2, torus_forms::LaurentPoly::one());
    std::fs::write(&path, m.to_json()).unwrap();
    let out = run(&["unitary-check", "--n", "4", "--g", "2", "--json", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert!(!v["result"]["failed"].as_array().unwrap().is_empty());
}

#[test]
fn theorem_a_report_is_all_zero() {
    let out = run(&["report", "theorem-a", "--n", "5"], None);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["result"]["rows"].as_array().unwrap().clone();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["difference"] == 0));
}

#[test]
fn theorem_b_and_frobenius() {
    let out = run(&["report", "theorem-b", "--n", "7", "--p", "3", "--g", "3", "--window", "4"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["certified"], true);
    let out = run(&["report", "theorem-b", "--n", "5", "--p", "3"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobenius", "--d", "3", "--n", "4"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["agree"], true);
}

#[test]
fn tables_over_inclusive_range() {
    let out = run(&["tables", "--name", "stable-stems", "--range", "0..3"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let text = v["result"].to_string();
    assert!(text.contains("Z/24"), "{text}");
    let out = run(&["tables", "--name", "mttheta", "--range", "1..14", "--n", "3"], None);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["unitary-check", "--n", "5", "--g", "3", "--seed", "7"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn environment_seed_overrides_flag() {
    let from_env = run(&["unitary-check", "--n", "5", "--g", "3", "--seed", "1"], Some("7"));
    let from_flag = run(&["unitary-check", "--n", "5", "--g", "3", "--seed", "7"], None);
    assert_eq!(from_env.stdout, from_flag.stdout);
    let other = run(&["unitary-check", "--n", "5", "--g", "3", "--seed", "1"], None);
    assert_ne!(other.stdout, from_flag.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["coinv", "--sign", "x", "--n", "3"][..],
        &["tables", "--name", "nonsense", "--range", "0..3"],
        &["tables", "--name", "stable-stems", "--range", "3"],
        &["no-such-command"],
        &["omega-check", "--n", "4", "--g", "2", "/nonexistent/matrix.json"],
    ] {
        let out = run(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
}
