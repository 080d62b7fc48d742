//! The sphericalis binary end to end.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sphericalis"));
    c.current_dir(env!("CARGO_MANIFEST_DIR"));
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value, String) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    (code, v, out)
}

#[test]
fn validate_fixture_file() {
    let (code, v, _) = json(&["validate", "fixtures/triple-product.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    let checks = v["payload"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn omega_both_forms() {
    let (code, v, _) = json(&["omega", "fixtures/group-a1.json", "--lambda", "-1", "--form", "both"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["consistency"], true);
    assert_eq!(v["payload"]["lambda_doubled"], serde_json::json!([-2]));
    assert!(v["payload"]["sum"]["value"]["display"].is_string());
}

#[test]
fn omega_both_consistent_on_every_fixture() {
    let (_, list, _) = json(&["examples"]);
    for fx in list["payload"]["fixtures"].as_array().unwrap() {
        let name = fx["name"].as_str().unwrap();
        let rank = fx["rank"].as_u64().unwrap() as usize;
        let lambda = vec!["0"; rank].join(",");
        let (code, v, _) = json(&["omega", name, "--lambda", &lambda, "--form", "both"]);
        assert_eq!(code, 0, "{name}: {v}");
        assert_eq!(v["payload"]["consistency"], true, "{name}");
    }
}

#[test]
fn oracle_nonsplit() {
    let (code, v, _) = json(&["oracle", "--case", "t-nonsplit-unram", "--p", "3", "--u", "1/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["case"], "T-nonsplit-unram");
    assert!(v["payload"]["max_rel_err"].as_f64().unwrap() < 1e-9);
}

#[test]
fn json_output_round_trips() {
    for args in [
        &["lvalue", "group-a2", "--factored"][..],
        &["volume", "group-a1", "--tamagawa"],
        &["bw", "gl2-sl3", "--word", "0"],
        &["eisenstein", "group-a2", "--word", "0,1"],
        &["path", "fixtures/paths/sp2-sp4.json"],
        &["oracle", "--case", "u-lower", "--p", "5"],
        &["plancherel", "group-a1", "--lmax", "2", "--prec", "12"],
    ] {
        let (code, v, text) = json(args);
        assert_eq!(code, 0, "{args:?}: {text}");
        let again = format!("{}\n", serde_json::to_string_pretty(&v).unwrap());
        assert_eq!(again, text, "{args:?}");
    }
}

#[test]
fn exit_codes_and_usage() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, err) = run(&["omega", "group-a1", "--lambda", "-1", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("oracle"));
    let (code, v, _) = json(&["omega", "group-a1", "--lambda", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
    let (code, v, _) = json(&["oracle", "--case", "t-nonsplit-unram", "--p", "9"]);
    assert_eq!(code, 2);
    assert!(v["diagnostics"][0].as_str().unwrap().contains("prime"));
}

#[test]
fn failing_check_exits_one() {
    let dir = std::env::temp_dir().join(format!("sphericalis-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/triple-product.json");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(src).unwrap()).unwrap();
    doc["theta_plus"].as_array_mut().unwrap().pop();
    let path = dir.join("unstable.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, v, _) = json(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    let (code, _, _) = json(&["oracle", "--case", "u-psi", "--p", "3", "--tol", "1e-30"]);
    assert_eq!(code, 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn human_output() {
    let (code, out, _) = run(&["volume", "group-a1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("volume: ok"));
    assert!(out.contains("1 + t^2"));
}

#[test]
fn examples_run_with_seed() {
    let (code, v, _) = json(&["--seed", "11", "examples", "gl2-sl3", "--run"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["battery"]["seed"], 11);
    assert_eq!(v["payload"]["battery"]["runs"][0]["pass"], true);
    let (code, _, _) = json(&["examples", "no-such-fixture"]);
    assert_eq!(code, 2);
}
