use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn kmdc() -> Command {
    Command::cargo_bin("kmdc").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = kmdc().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

#[test]
fn denominator_matches_golden() {
    let got = stdout_of(&["denominator", &data("star3.json"), "--cutoff", "3", "--style", "example55"]);
    assert_eq!(got, golden("denominator_star3.txt"));
    assert_eq!(got.lines().filter(|l| l.contains("ch(L(")).count(), 11);
}

#[test]
fn denominator_json_terms() {
    let v = json_of(&["denominator", &data("star3.json"), "--cutoff", "3", "--json"]);
    assert_eq!(v["complete"], false);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 11);
    assert_eq!(terms[1]["sign"], -1);
}

#[test]
fn descend_matches_golden() {
    let got = stdout_of(&["descend", &data("star3.json"), &data("descent_state.json")]);
    assert_eq!(got, golden("descend.txt"));
    assert!(got.contains("steps: 6"));
}

#[test]
fn inline_state_is_accepted() {
    let v = json_of(&[
        "descend",
        &data("star3.json"),
        r#"{"vertex":"v","a_v":4,"slots":[[2,1],[2,1],[1,2]]}"#,
        "--json",
    ]);
    assert_eq!(v["level"], 7);
    assert_eq!(v["steps"].as_array().unwrap().len(), 6);
}

#[test]
fn state_outside_orbit_is_rejected() {
    let got = stdout_of(&["member", &data("star3.json"), &data("outside_state.json")]);
    assert_eq!(got, golden("member_outside.txt"));
    let v = json_of(&["member", &data("star3.json"), &data("outside_state.json"), "--json"]);
    assert_eq!(v["member"], false);
    assert_eq!(v["reason"], "NegativeEntry");
}

#[test]
fn word_of_non_member_fails() {
    kmdc()
        .args(["word", &data("star3.json"), &data("outside_state.json")])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("not in the orbit"));
}

#[test]
fn word_of_member() {
    let v = json_of(&["word", &data("star3.json"), &data("descent_state.json"), "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 6);
    assert_eq!(v[5], "v:v");
}

#[test]
fn orbit_counts() {
    let v = json_of(&["orbit", &data("star3.json"), "v", "--max-level", "5", "--json"]);
    assert_eq!(v["counts"], serde_json::json!([1, 1, 3, 6, 13]));
    let text = stdout_of(&["orbit", &data("star4.json"), "v", "--max-level", "3"]);
    assert!(text.contains("level 3 (4 states)"));
}

#[test]
fn tensor_outputs() {
    let got = stdout_of(&["tensor", &data("star3.json"), "--serre", "--json"]);
    assert_eq!(got, golden("star3_serre.json"));
    let v = json_of(&["tensor", &data("hub.json"), "--degree", "c", "--json"]);
    assert_eq!(v[0]["factors"]["t4"]["lambda"], serde_json::json!([1]));
    assert_eq!(v[0]["factors"]["t1"]["mu"], serde_json::json!([1]));
}

#[test]
fn center_outputs() {
    assert_eq!(stdout_of(&["center", &data("hub.json")]), golden("center_hub.txt"));
    let v = json_of(&["center", &data("hub.json"), "--amputate", "a", "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 7);
}

#[test]
fn character_of_dominant_weight() {
    let text = stdout_of(&["character", &data("star3.json"), "--phi", &data("phi_star3.json"), "--cutoff", "2"]);
    assert!(text.starts_with("ch(L(-2;0,...;0,...;0,...)) =\n+ ch(M(-2;"));
    kmdc()
        .args(["character", &data("star3.json"), "--phi", r#"{"v:v": 1}"#, "--cutoff", "2"])
        .assert()
        .code(1);
}

#[test]
fn invalid_input_exits_1() {
    kmdc()
        .args(["validate", &data("bad_graph.json")])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("undeclared vertex"));
    kmdc().args(["validate", &data("missing.json")]).assert().code(1);
    kmdc()
        .args(["descend", &data("star3.json"), "{not json"])
        .assert()
        .code(1);
    kmdc().args(["orbit", &data("star3.json"), "w", "--max-level", "2"]).assert().code(1);
}

#[test]
fn validate_ok() {
    kmdc()
        .args(["validate", &data("hub.json")])
        .assert()
        .success()
        .stdout("ok: 4 vertices, 4 edges\n");
}

#[test]
fn verify_checks_pass() {
    let v = json_of(&["verify", "--oracle", "3", "2", "5", "--gl-dims", "6", "--invariants", "5", "--json"]);
    assert_eq!(v["oracle"]["holds"], true);
    assert_eq!(v["gl_dims"][0]["lambda2"], "120");
    assert!(v["invariants"].as_array().unwrap().iter().all(|r| r["holds"] == true));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--oracle", "3", "2", "4", "--json"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
    let args = ["orbit", &data("star4.json"), "v", "--max-level", "5", "--json"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}
