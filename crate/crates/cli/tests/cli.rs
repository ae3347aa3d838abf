use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn col(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_col")).args(args).env_remove("COL_CAP").output().expect("spawn col")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const V1: &str = r#"{"obj":["p"],"agents":{"a":{"poss":[{"obj":["p"]}],"imp":[{"obj":[]},{"obj":["p"]}]}}}"#;

#[test]
fn count_level_one() {
    let o = col(&["count", "--level", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("level=1 total=18 completed=8 incompleted=10"));
}

#[test]
fn count_json_level_two() {
    let o = col(&["--json", "count", "--level", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[2]["total"], "30233088");
    assert_eq!(v[2]["completed"], "524288");
}

#[test]
fn parse_reports_depth() {
    let o = col(&["parse", "-f", "O[a] (p & K[a] p)"]);
    assert_eq!(stdout(&o), "O[a] (p & K[a] p)\nmodal depth: 2\n");
}

#[test]
fn eval_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(V1.as_bytes()).unwrap();
    let arg = format!("@{}", file.path().display());
    let k = col(&["eval", "-f", "K[a] p", "-w", &arg]);
    assert_eq!(k.status.code(), Some(0));
    assert_eq!(stdout(&k).trim(), "t");
    let m = col(&["eval", "-f", "M[a] p", "-w", &arg]);
    assert_eq!(stdout(&m).trim(), "f");
}

#[test]
fn eval_level_zero_is_unresolved_for_knowledge() {
    let o = col(&["eval", "-f", "K[a] p", "-w", r#"{"obj":["p"]}"#]);
    assert_eq!(stdout(&o).trim(), "u");
}

#[test]
fn enumerate_level_one() {
    let o = col(&["--json", "enumerate", "--level", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total"], 18);
    assert_eq!(v["biworlds"].as_array().unwrap().iter().filter(|b| b["completed"] == true).count(), 8);
}

#[test]
fn enumerate_over_cap_exits_3() {
    let o = col(&["--json", "enumerate", "--level", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "CapExceeded");
    assert_eq!(v["error"]["exit_code"], 3);
}

#[test]
fn cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_col"))
        .args(["enumerate", "--level", "1"])
        .env("COL_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2_with_json() {
    for args in [
        &["--json", "count", "--level", "x"][..],
        &["--json", "parse", "-f", "K[b] p"],
        &["--json", "eval", "-f", "p", "-w", "{not json"],
        &["--json", "eval", "-f", "p", "-w", "@/nonexistent/world.json"],
        &["--json", "--agents", "", "count"],
        &["--json", "symbolic", "eval", "nope", "-f", "p"],
    ] {
        let o = col(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(v["error"]["exit_code"], 2);
        assert!(v["error"]["kind"].is_string());
    }
}

#[test]
fn text_errors_go_to_stderr() {
    let o = col(&["parse", "-f", "K[b] p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[UndeclaredAgent]"));
}

#[test]
fn kripke_entailment_and_countermodel() {
    let o = col(&["--atoms", "p,q", "kripke", "-k", "0", "-p", "M[a] p", "-f", "~K[a] q"]);
    assert!(stdout(&o).starts_with("entailed"));
    let o = col(&["--json", "kripke", "-k", "0", "-f", "K[a] p"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entailed"], false);
    assert!(v["countermodel"].is_object());
    assert_eq!(v["worlds"], 8);
}

#[test]
fn kripke_at_world_labels_common_knowledge() {
    let w = r#"{"obj":["p"],"agents":{"a":{"poss":[],"imp":[{"obj":[]},{"obj":["p"]}]}}}"#;
    let o = col(&["--json", "kripke", "-f", "C[{a}] p", "-w", w]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reachability_analog"], true);
    assert_eq!(v["value"], true);
    // an incompleted biworld is not a world of the structure
    let o = col(&["--json", "kripke", "-f", "p", "-w", V1]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn models_and_only_knowing() {
    let o = col(&["--json", "models", "-f", "O[a] p"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 2);
    let o = col(&["--json", "models", "--oknow", "-f", "p", "--obj", "p"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["check"], "t");
    assert_eq!(v["world"]["agents"]["a"]["poss"], serde_json::json!([{"obj": ["p"]}]));
    let o = col(&["--json", "models", "--oknow", "--pi", "-f", "p", "--obj", "p"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["world"]["agents"]["a"]["poss"].as_array().unwrap().len(), 3);
}

#[test]
fn symbolic_example3() {
    let o = col(&["--json", "symbolic", "example3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"]["value"], "t");
    assert_eq!(v["evidence"][0]["survivors"], 6);
    assert_eq!(v["evidence"][1]["survivors"], 24);
}

#[test]
fn symbolic_without_u_is_unsupported() {
    let fams = r#"[{"name":"v","obj":["p"],"rules":{"a":{"poss":{"prev":"v"},"imp":"all"}}}]"#;
    let o = col(&["symbolic", "--families", fams, "example3"]);
    assert!(stdout(&o).contains("unsupported"), "{}", stdout(&o));
}

#[test]
fn symbolic_closure_and_materialize() {
    let o = col(&["symbolic", "closure", "u", "-f", "p", "-g", "a"]);
    assert_eq!(stdout(&o).lines().next(), Some("t"));
    let o = col(&["--json", "symbolic", "materialize", "v", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["world"], serde_json::from_str::<Value>(V1).unwrap());
}

#[test]
fn fast_suite_passes() {
    let o = col(&["--json", "--seed", "3", "suite", "--profile", "fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["checks"].as_array().unwrap().len(), 10);
}
