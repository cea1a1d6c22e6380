use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_aqft-kit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut input = child.stdin.take().unwrap();
    if let Some(bytes) = stdin {
        input.write_all(bytes).unwrap();
    }
    drop(input);
    child.wait_with_output().unwrap()
}

fn emit(name: &str) -> Vec<u8> {
    let out = run(&["corpus", "emit", name], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn corpus_lists_every_entry() {
    let out = run(&["corpus", "list"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["rce", "loc1", "disk", "cospan", "toy-homotopy", "toy-free"] {
        assert!(text.contains(name), "{name} missing from:\n{text}");
    }
}

#[test]
fn emitted_bundles_verify() {
    let out = run(&["corpus", "verify", "cospan"], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let json: serde_json::Value = serde_json::from_slice(&emit("rce")).unwrap();
    assert_eq!(json["schema"], "aqft-kit/1");
}

#[test]
fn piped_time_slice() {
    let out = run(&["time-slice", "--w", "all"], Some(&emit("rce")));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn operad_equal_respects_orthogonality() {
    let bundle = emit("cospan");
    let args = ["--format", "json", "operad-equal", "--lhs", "[f1,f2 -> N]", "--rhs", "[perm=2 1; f1,f2 -> N]"];
    let out = run(&args, Some(&bundle));
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["equal"], true);

    let mut plain = args.to_vec();
    plain.push("--ignore-orthogonality");
    let out = run(&plain, Some(&bundle));
    assert_eq!(code(&out), 1);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["equal"], false);
}

#[test]
fn strictify_exit_codes() {
    assert_eq!(code(&run(&["strictify"], Some(&emit("toy-homotopy")))), 0);
    assert_eq!(code(&run(&["strictify"], Some(&emit("toy-neither")))), 1);
}

#[test]
fn uncertified_localization_fails() {
    assert_eq!(code(&run(&["check-reflective"], Some(&emit("rce")))), 1);
    assert_eq!(code(&run(&["check-reflective"], Some(&emit("loc1")))), 0);
}

#[test]
fn schema_errors_exit_with_two() {
    let out = run(&["check-ortho"], Some(b"{\"schema\": \"aqft-kit/1\", \"name\": 3"));
    assert_eq!(code(&out), 2);
    let out = run(&["check-ortho"], Some(b"{\"schema\": \"something-else\"}"));
    assert_eq!(code(&out), 2);
}

#[test]
fn json_output_is_deterministic() {
    let bundle = emit("toy-rce");
    let a = run(&["--format", "json", "rce", "--model", "scale"], Some(&bundle));
    let b = run(&["--format", "json", "rce", "--model", "scale"], Some(&bundle));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json[0]["generator"]["0"], serde_json::json!([["1", "0"], ["0", "2"]]));
}
