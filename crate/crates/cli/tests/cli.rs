//! End-to-end tests driving the compiled binary.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bstc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bstc"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn temp_formula(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("bstc_cli_{name}.bstc"));
    std::fs::write(&path, text).unwrap();
    path
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn solve_menu_contrast_across_semantics() {
    let file = fixture("menu_contrast.bstc");
    for (sem, expect) in [
        ("unrestricted", 0),
        ("alpha", 0),
        ("beta", 0),
        ("warp", 1),
    ] {
        let out = bstc().args(["solve"]).arg(&file).args(["-s", sem]).output().unwrap();
        assert_eq!(code(&out), expect, "semantics {sem}");
        let v = json_stdout(&out);
        assert_eq!(v["semantics"], sem);
        if expect == 0 {
            assert_eq!(v["status"], "sat");
            let inds = v["model"]["individuals"].as_object().unwrap();
            assert_eq!(inds.len(), 3);
            assert!(v["model"]["universe"].as_array().unwrap().len() >= 3);
        } else {
            assert_eq!(v["status"], "unsat");
            assert!(v["model"].is_null());
        }
    }
}

#[test]
fn solve_reads_stdin() {
    let mut child = bstc()
        .args(["solve", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"x in c({x} + {y}) and x != y")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json_stdout(&out)["status"], "sat");
}

#[test]
fn solve_verify_passes_on_both_verdicts() {
    let file = fixture("menu_contrast.bstc");
    let sat = bstc().args(["solve"]).arg(&file).args(["-s", "beta", "--verify"]).output().unwrap();
    assert_eq!(code(&sat), 0, "stderr: {}", String::from_utf8_lossy(&sat.stderr));
    let unsat = bstc().args(["solve"]).arg(&file).args(["-s", "warp", "--verify"]).output().unwrap();
    assert_eq!(code(&unsat), 1, "stderr: {}", String::from_utf8_lossy(&unsat.stderr));
}

#[test]
fn warp_models_carry_ranks() {
    let file = temp_formula("ranked", "x in c({x} + {y}) and x != y");
    let out = bstc().args(["solve"]).arg(&file).args(["-s", "warp"]).output().unwrap();
    assert_eq!(code(&out), 0);
    let v = json_stdout(&out);
    assert!(v["model"]["ranks"].is_object());
    let alpha = bstc().args(["solve"]).arg(&file).args(["-s", "alpha"]).output().unwrap();
    assert!(json_stdout(&alpha)["model"]["ranks"].is_null());
}

#[test]
fn check_axioms_cyclic_pairs_all_hold() {
    let out = bstc().args(["check-axioms"]).arg(fixture("cyclic_pairs.json")).output().unwrap();
    assert_eq!(code(&out), 0);
    let v = json_stdout(&out);
    assert_eq!(v["all_satisfied"], true);
    assert_eq!(v["axioms"].as_array().unwrap().len(), 5);
}

#[test]
fn check_axioms_overlap_reports_violations() {
    let out = bstc().args(["check-axioms"]).arg(fixture("four_item_overlap.json")).output().unwrap();
    assert_eq!(code(&out), 1);
    let v = json_stdout(&out);
    assert_eq!(v["all_satisfied"], false);
    let axioms = v["axioms"].as_array().unwrap();
    let entry = |name: &str| axioms.iter().find(|a| a["axiom"] == name).unwrap();
    assert_eq!(entry("alpha")["satisfied"], true);
    assert_eq!(entry("beta")["satisfied"], false);
    assert!(entry("beta")["counterexample"].is_object());
}

#[test]
fn check_single_axiom_flag() {
    let out = bstc()
        .args(["check-axioms"])
        .arg(fixture("four_item_overlap.json"))
        .args(["--axiom", "alpha"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json_stdout(&out)["axioms"].as_array().unwrap().len(), 1);
}

#[test]
fn lift_cyclic_pairs_beta_succeeds() {
    let out = bstc()
        .args(["lift"])
        .arg(fixture("cyclic_pairs.json"))
        .args(["--axiom", "beta"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = json_stdout(&out);
    assert_eq!(v["liftable"], true);
    assert_eq!(v["lift"]["menus"].as_array().unwrap().len(), 7);
}

#[test]
fn lift_cyclic_pairs_alpha_obstructed() {
    let out = bstc()
        .args(["lift"])
        .arg(fixture("cyclic_pairs.json"))
        .args(["--axiom", "alpha"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let v = json_stdout(&out);
    assert_eq!(v["liftable"], false);
    assert_eq!(v["obstruction"]["kind"], "rejection-cover");
    assert_eq!(v["obstruction"]["detail"]["family"].as_array().unwrap().len(), 6);
}

#[test]
fn lift_overlap_alpha_obstructed() {
    let out = bstc()
        .args(["lift"])
        .arg(fixture("four_item_overlap.json"))
        .args(["--axiom", "alpha"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let v = json_stdout(&out);
    assert_eq!(v["obstruction"]["kind"], "rejection-cover");
    assert_eq!(v["obstruction"]["detail"]["family"].as_array().unwrap().len(), 10);
}

#[test]
fn rationalize_cyclic_pairs() {
    let out = bstc().args(["rationalize"]).arg(fixture("cyclic_pairs.json")).output().unwrap();
    assert_eq!(code(&out), 0);
    let v = json_stdout(&out);
    assert_eq!(v["rationalizable"], true);
    assert_eq!(v["relation"].as_array().unwrap().len(), 3);
    assert_eq!(v["cyclic"], true);
}

#[test]
fn rationalize_overlap_fails() {
    let out = bstc().args(["rationalize"]).arg(fixture("four_item_overlap.json")).output().unwrap();
    assert_eq!(code(&out), 1);
    assert_eq!(json_stdout(&out)["rationalizable"], false);
}

#[test]
fn oracle_decides_small_formulas() {
    let sat = temp_formula("oracle_sat", "x in c({x} + {y})");
    let out = bstc().args(["oracle"]).arg(&sat).output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json_stdout(&out)["status"], "sat");

    let unsat = temp_formula("oracle_unsat", "c({x}) = {y} and x != y");
    let out = bstc().args(["oracle"]).arg(&unsat).output().unwrap();
    assert_eq!(code(&out), 1);
    assert_eq!(json_stdout(&out)["status"], "unsat");
}

#[test]
fn closed_stdout_pipe_is_not_a_crash() {
    let mut child = bstc()
        .args(["solve"])
        .arg(fixture("menu_contrast.bstc"))
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = bstc().args(["solve", "/nonexistent/nowhere.bstc"]).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn parse_errors_carry_position() {
    let file = temp_formula("bad_parse", "x in and");
    let out = bstc().args(["solve"]).arg(&file).output().unwrap();
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1:6"), "stderr: {err}");
}

#[test]
fn unknown_semantics_rejected() {
    let file = fixture("menu_contrast.bstc");
    let out = bstc().args(["solve"]).arg(&file).args(["-s", "gamma"]).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown semantics"));
}

#[test]
fn unknown_axiom_rejected() {
    let out = bstc()
        .args(["lift"])
        .arg(fixture("cyclic_pairs.json"))
        .args(["--axiom", "sigma"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_choice_json_rejected() {
    let file = temp_formula("bad_json", "{\"universe\": [\"x\", \"x\"], \"menus\": []}");
    let out = bstc().args(["check-axioms"]).arg(&file).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn place_ceiling_env_var_maps_to_resource_exit() {
    let out = bstc()
        .args(["solve"])
        .arg(fixture("menu_contrast.bstc"))
        .env("BSTC_MAX_PLACES", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);

    let bad = bstc()
        .args(["solve"])
        .arg(fixture("menu_contrast.bstc"))
        .env("BSTC_MAX_PLACES", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}
