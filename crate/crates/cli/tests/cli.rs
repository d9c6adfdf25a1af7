use std::io::Write;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> String {
    format!("{}/../../data/groups/{name}.pc", env!("CARGO_MANIFEST_DIR"))
}

fn qpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpc"))
        .args(args)
        .output()
        .unwrap()
}

fn qpc_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qpc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tensor_of_s3() {
    let o = qpc(&["tensor", &data("s3"), "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("# tensor: C12"), "{s}");
    assert!(s.contains("# diagonal: C2"), "{s}");
}

#[test]
fn dinf_is_capable() {
    let o = qpc(&["capable", &data("dinf"), "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
}

#[test]
fn check_reports_inconsistency() {
    let o = qpc(&["check", &data("broken")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).lines().count() > 1);
    let o = qpc(&["check", &data("s3")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "consistent\n");
}

#[test]
fn exit_codes() {
    assert_eq!(
        qpc(&["wedge", &data("broken"), "--q", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(
        qpc_stdin(&["describe", "-"], "gens a\npow a^2 = id\n")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qpc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        qpc(&["describe", "/nonexistent/file.pc"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qpc(&["nu", &data("s3"), "--q", "2", "--q-perfect-shortcut"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn stdin_and_output_file() {
    let text = std::fs::read_to_string(data("s3")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wedge.pc");
    let o = qpc_stdin(
        &["wedge", "-", "--q", "2", "-o", out.to_str().unwrap()],
        &text,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let o = qpc(&["describe", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "C6\n");
}

#[test]
fn json_round_trip() {
    let o = qpc(&["cover", &data("s3"), "--q", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["gens"].as_array().unwrap().len(), 4);
    assert_eq!(v["provenance"][3], "tail");
    let o = qpc_stdin(&["describe", "-"], &stdout(&o));
    assert_eq!(stdout(&o), "order 24, ab = C2 x C4\n");
}

#[test]
fn output_is_deterministic() {
    for cmd in ["cover", "wedge", "tau", "nu", "tensor", "excenter"] {
        let a = qpc(&[cmd, &data("d4"), "--q", "2", "--format", "json"]);
        let b = qpc(&[cmd, &data("d4"), "--q", "2", "--format", "json"]);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn h2_and_excenter() {
    let o = qpc(&["h2", &data("s3"), "--q", "2"]);
    let o = qpc_stdin(&["describe", "-"], &stdout(&o));
    assert_eq!(stdout(&o), "C2\n");
    let o = qpc(&["excenter", &data("c2"), "--q", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], "2");
}

#[test]
fn tensor_matches_wedge_modulo_diagonal() {
    // |tensor| / |diagonal| = |wedge|
    let order = |cmd: &str| {
        let o = qpc(&[cmd, &data("d4"), "--q", "2", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v
    };
    let t = order("tensor");
    let size = |s: &serde_json::Value| s["order"].as_str().unwrap().parse::<u64>().unwrap();
    let w = qpc(&["wedge", &data("d4"), "--q", "2"]);
    let w = qpc_stdin(&["describe", "-", "--format", "json"], &stdout(&w));
    let w: serde_json::Value = serde_json::from_slice(&w.stdout).unwrap();
    assert_eq!(
        size(&t["tensor_structure"]),
        size(&t["diagonal_structure"]) * size(&w)
    );
}

#[test]
fn hidden_oracle() {
    let o = qpc(&["oracle", &data("q8")]);
    assert_eq!(stdout(&o), "order: 8\nabelian: false\ncenter order: 2\n");
}
