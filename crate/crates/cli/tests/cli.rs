use std::process::{Command, Output};

use serde_json::Value;

fn itypes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itypes")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn normalize_prints_the_normal_form() {
    let o = itypes(&["normalize", "--term", "(\\x. x) y"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "y");
    let o = itypes(&["--json", "normalize", "--term", "K1 a b"]);
    assert_eq!(json(&o)["result"], "a");
}

#[test]
fn classify_reports_the_verdict() {
    let o = itypes(&["--json", "classify", "--type", "forall X. X -> X"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"]["kind"], "ITypeUpToBound");
    assert_eq!(v["order"], 1);
    assert_eq!(v["inhabitants"][0]["term"], "\\x. x");
}

#[test]
fn exit_codes() {
    assert_eq!(itypes(&["classify", "--type", "Id", "--expect-itype"]).status.code(), Some(0));
    assert_eq!(itypes(&["classify", "--type", "Bool", "--expect-itype"]).status.code(), Some(1));
    assert_eq!(itypes(&["parse", "--type", "forall"]).status.code(), Some(2));
    assert_eq!(itypes(&["normalize", "--term", "\\x."]).status.code(), Some(2));
    assert_eq!(itypes(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn typecheck_and_witness() {
    let e = "forall X. (forall Y. (Id -> Y)) -> Id";
    let o = itypes(&["--json", "typecheck", "--term", "\\x. x id", "--type", e]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["outcome"], "found");
    let o = itypes(&["--json", "witness", "--type", e, "--term", "\\x. x id"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o).is_object());
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "classify", "--type", "forall X. (X -> X) -> X -> X", "--size-bound", "12"];
    let a = itypes(&args);
    let b = itypes(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_filter_runs_matching_checks() {
    let o = itypes(&["--json", "selftest", "--filter", "ij-typing", "--cases", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> =
        stdout(&o).lines().map(|l| serde_json::from_str::<Value>(l).unwrap()["name"].as_str().unwrap().to_string()).collect();
    assert!(names.contains(&"ij-typing".to_string()));
    assert!(names.iter().all(|n| n.contains("ij-typing")));
}

#[test]
fn corrupted_golden_is_named() {
    let goldens = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/goldens/goldens.jsonl")).unwrap();
    let corrupted: String = goldens
        .lines()
        .map(|l| if l.contains("\"classify-id\"") { l.replace("\"order\":1", "\"order\":2") } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    assert_ne!(corrupted.trim(), goldens.trim());
    let path = std::env::temp_dir().join(format!("itypes-goldens-{}.jsonl", std::process::id()));
    std::fs::write(&path, corrupted).unwrap();
    let o = itypes(&["--golden", path.to_str().unwrap(), "selftest", "--filter", "classify-id", "--cases", "1"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o) + &String::from_utf8_lossy(&o.stderr);
    assert!(text.contains("classify-id"), "{text}");
}
