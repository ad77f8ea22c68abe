use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE: &str = r#"{"vector": {"": "1", "00": "1", "01": "1"}}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Fixture {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }
}

fn jtx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtx"))
        .args(args)
        .env_remove("JTX_ORACLE_CAP")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn norm_of_example() {
    let f = Fixture::new();
    let x = f.file("x.json", EXAMPLE);
    let doc = json_of(&jtx(&["norm", x.to_str().unwrap()]));
    assert_eq!(doc["norm_sq"], "5");
    assert_eq!(doc["norm_decimal"], "2.236067977500");
    assert_eq!(doc["witness"]["segments"].as_array().unwrap().len(), 2);

    let doc = json_of(&jtx(&[
        "norm",
        "--oracle",
        "--digits",
        "3",
        x.to_str().unwrap(),
    ]));
    assert_eq!(doc["oracle_norm_sq"], "5");
    assert_eq!(doc["norm_decimal"], "2.236");
}

#[test]
fn gap_and_separation() {
    let f = Fixture::new();
    let x = f.file("x.json", EXAMPLE);
    let x = x.to_str().unwrap();
    assert_eq!(
        json_of(&jtx(&["gap", "--u", "", "--v", "0", x]))["gap"],
        "2"
    );
    assert_eq!(
        json_of(&jtx(&["gap", "--u", "00", "--v", "01", x]))["gap"],
        "0"
    );
    let sep = json_of(&jtx(&["separated", x]));
    assert_eq!(sep["separated"], false);
    assert_eq!(sep["first_blocked_pair"], serde_json::json!(["", "0"]));
    let all = json_of(&jtx(&["separated", "--all-pairs", x]));
    assert_eq!(all["pair_gaps"].as_array().unwrap().len(), 5);
    assert_eq!(code(&jtx(&["gap", "--u", "1", "--v", "0", x])), 3);
}

#[test]
fn extreme_certificates() {
    let f = Fixture::new();
    let x = f.file("x.json", EXAMPLE);
    let doc = json_of(&jtx(&["extreme", x.to_str().unwrap()]));
    assert_eq!(doc["verdict"], "not-extreme");
    assert_eq!(doc["epsilon"], "1/2");

    let single = f.file("e.json", r#"{"vector": {"": "1"}}"#);
    let doc = json_of(&jtx(&["extreme", single.to_str().unwrap()]));
    assert_eq!(doc["verdict"], "extreme");
    assert_eq!(doc["basis"], "l2-equality");
    assert_eq!(doc["witness_y"], Value::Null);

    let zero = f.file("z.json", r#"{"vector": {}}"#);
    assert_eq!(code(&jtx(&["extreme", zero.to_str().unwrap()])), 3);
}

#[test]
fn greedy_and_consistency() {
    let f = Fixture::new();
    let x = f.file("x.json", r#"{"vector": {"": "1", "0": "2", "1": "1"}}"#);
    let x = x.to_str().unwrap();
    let doc = json_of(&jtx(&["greedy", x]));
    assert_eq!(doc["score"], "10");
    assert_eq!(doc["chosen"][""], "0");
    assert_eq!(doc["s_values"][""], "3");

    let bad = f.file(
        "p.json",
        r#"{"segments": [{"top": "", "bottom": "1"}, {"top": "0", "bottom": "0"}]}"#,
    );
    let doc = json_of(&jtx(&[
        "consistent",
        "--partition",
        bad.to_str().unwrap(),
        x,
    ]));
    assert_eq!(doc["consistent"], false);
    assert_eq!(doc["violations"][0]["better"], "0");

    let signed = f.file("s.json", r#"{"vector": {"": "1", "0": "-1"}}"#);
    assert_eq!(code(&jtx(&["greedy", signed.to_str().unwrap()])), 3);
    assert_eq!(code(&jtx(&["equal-sums", signed.to_str().unwrap()])), 3);
}

#[test]
fn tie_policy_changes_greedy_choice() {
    let f = Fixture::new();
    let x = f.file("x.json", EXAMPLE);
    let x = x.to_str().unwrap();
    assert_eq!(json_of(&jtx(&["greedy", x]))["chosen"][""], "00");
    assert_eq!(
        json_of(&jtx(&["greedy", "--tie-policy", "lex-max", x]))["chosen"][""],
        "01"
    );
}

#[test]
fn enumeration_and_oracle_cap() {
    let f = Fixture::new();
    let x = f.file("x.json", EXAMPLE);
    let x = x.to_str().unwrap();
    let doc = json_of(&jtx(&["enumerate-norming", x]));
    assert_eq!(doc["count"], 2);
    assert_eq!(
        code(&jtx(&["enumerate-norming", "--oracle-cap", "3", x])),
        4
    );

    let env = Command::new(env!("CARGO_BIN_EXE_jtx"))
        .args(["norm", "--oracle", x])
        .env("JTX_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&env), 4);
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_jtx"))
        .args(["norm", "--oracle", "--oracle-cap", "4", x])
        .env("JTX_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&flag_wins), 0);
}

#[test]
fn isolatable_equal_sums_witness() {
    let f = Fixture::new();
    let x = f.file("x.json", EXAMPLE);
    let x = x.to_str().unwrap();
    let doc = json_of(&jtx(&["isolatable", x]));
    assert_eq!(
        (doc["all_isolatable"].clone(), doc["l2_equality"].clone()),
        (false.into(), false.into())
    );

    let w = json_of(&jtx(&[
        "witness",
        "--u",
        "",
        "--v",
        "0",
        "--epsilon",
        "1/8",
        x,
    ]));
    assert_eq!(w["epsilon"], "1/8");
    assert_eq!(w["norm_sq_plus"], "5");
    assert_eq!(w["norm_sq_minus"], "5");
    assert_eq!(code(&jtx(&["witness", "--u", "0", "--v", "00", x])), 3);

    let b = f.file("b.json", r#"{"vector": {"": "1", "0": "1", "1": "1"}}"#);
    let doc = json_of(&jtx(&["equal-sums", b.to_str().unwrap()]));
    assert_eq!(doc["holds"], true);
    assert_eq!(doc["sigma"], "2");
}

#[test]
fn dot_output_to_file() {
    let f = Fixture::new();
    let x = f.file("x.json", EXAMPLE);
    let out = f.dir.path().join("g.dot");
    let run = jtx(&["dot", "--out", out.to_str().unwrap(), x.to_str().unwrap()]);
    assert_eq!(code(&run), 0);
    let text = fs::read_to_string(out).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("style=dashed"));
}

#[test]
fn parse_failures_exit_two() {
    let f = Fixture::new();
    for body in [
        "not json",
        r#"{"vector": {"0a": "1"}}"#,
        r#"{"vector": {"0": "1/0"}}"#,
    ] {
        let x = f.file("bad.json", body);
        assert_eq!(code(&jtx(&["norm", x.to_str().unwrap()])), 2, "{body}");
    }
    assert_eq!(code(&jtx(&["norm", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&jtx(&["bogus"])), 2);
    let deep = f.file("deep.json", r#"{"vector": {"0000": "1"}}"#);
    assert_eq!(
        code(&jtx(&["norm", "--max-depth", "3", deep.to_str().unwrap()])),
        2
    );
}

#[test]
fn output_is_byte_stable() {
    let f = Fixture::new();
    let x = f.file(
        "x.json",
        r#"{"vector": {"": "1", "00": "2", "01": "1", "1": "2"}}"#,
    );
    let x = x.to_str().unwrap();
    for cmd in [
        "norm",
        "extreme",
        "greedy",
        "equal-sums",
        "enumerate-norming",
        "dot",
    ] {
        let a = jtx(&[cmd, x]);
        let b = jtx(&[cmd, x]);
        assert_eq!(code(&a), 0, "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}
