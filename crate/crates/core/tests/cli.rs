use std::process::Command;

use serde_json::Value;

fn leftorder(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_leftorder")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let doc = serde_json::from_str(&stdout).or_else(|_| serde_json::from_str(&stderr)).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc, stderr)
}

const KLEIN_PP: &str = r#"{"kind":"klein","ex":1,"ey":1}"#;

#[test]
fn axioms_pass() {
    let (code, doc, _) = leftorder(&["axioms", "--cone", KLEIN_PP, "--r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["outcome"], "pass");
    assert_eq!(doc["witnesses"], Value::Array(vec![]));
}

#[test]
fn klein_orbit_has_two_cones() {
    let (code, doc, _) = leftorder(&["orbit", "--group", "klein", "--cone", KLEIN_PP, "--conjugators", "x,y"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["size"], 2);
    assert_eq!(doc["result"]["representatives"][1], serde_json::json!({"kind": "klein", "ex": 1, "ey": -1}));
}

#[test]
fn klein_census_has_four_survivors() {
    let (code, doc, _) = leftorder(&["census", "--group", "klein", "--r", "4", "--extend", "8"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["survivors"], 4);
    assert!(doc["result"]["digest"].as_str().unwrap().starts_with("4:"));
}

#[test]
fn witnesses_exit_one() {
    let (code, doc, _) = leftorder(&[
        "conradian",
        "--cone",
        r#"{"kind":"dynamical"}"#,
        "--r",
        "3",
        "--verify-witness",
    ]);
    assert_eq!(code, 1);
    assert_eq!(doc["witnesses"][0]["kind"], "conradian-violation");
    assert_eq!(doc["witnesses"][0]["verified"], true);
}

#[test]
fn bad_input_exits_two() {
    let (code, _, stderr) = leftorder(&["orbit", "--cone", r#"{"kind":"slope","a":[0,0],"variant":"++"}"#, "--conjugators", "e1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("zero vector"), "{stderr}");
    let (code, _, _) = leftorder(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn undecided_orbit_reports_partial_result() {
    // dynamical conjugates agree with each other on a radius-0 ball and have no comparable descriptor
    let (code, doc, _) =
        leftorder(&["orbit", "--cone", r#"{"kind":"dynamical"}"#, "--conjugators", "a", "--strategy", "ball:0"]);
    assert_eq!(code, 2);
    assert!(doc["result"]["error"].as_str().unwrap().starts_with("orbit undecided"));
    assert_eq!(doc["result"]["partial"]["size"], 1);
}

#[test]
fn out_flag_writes_the_document() {
    let dir = std::env::temp_dir().join(format!("leftorder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nf.json");
    let (code, _, _) = leftorder(&["amalgam-nf", "--word", "a^2 b^-1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["display"], "b");
    std::fs::remove_dir_all(&dir).unwrap();
}
