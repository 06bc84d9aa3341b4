use std::process::Command;

fn collatz(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_collatz"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes() {
    assert_eq!(collatz(&["step", "53"]).0, 0);
    assert_eq!(collatz(&["step", "0"]).0, 1);
    assert_eq!(collatz(&["scan", "5", "2"]).0, 1);
    assert_eq!(collatz(&["card", "27", "--budget", "3"]).0, 2);
}

#[test]
fn scan_streams_progress_to_stderr() {
    let (code, out, err) = collatz(&["scan", "1", "3001", "--chunk-size", "1000", "--workers", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        err,
        "CHUNK 1 1001 ok=1000 undecided=0\n\
         CHUNK 1001 2001 ok=1000 undecided=0\n\
         CHUNK 2001 3001 ok=1000 undecided=0\n"
    );
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(summary["verified"], 3000);
}

#[test]
fn resume_from_skips_done_work() {
    let (code, _, err) = collatz(&[
        "scan", "1", "3001", "--chunk-size", "1000", "--resume-from", "2001",
    ]);
    assert_eq!(code, 0);
    assert_eq!(err, "CHUNK 2001 3001 ok=1000 undecided=0\n");
}

#[test]
fn huge_input_roundtrips_through_json() {
    let n = num_bigint::BigUint::from(3u8).pow(600).to_string();
    let (code, out, _) = collatz(&["accel", &n, "--format", "json"]);
    assert_eq!(code, 0);
    let t = collatz_core::export::accelerated_from_json(&out).unwrap();
    assert_eq!(t.input.to_string(), n);
    assert!(t.terminated);
}

#[test]
fn graph_has_one_edge_per_node() {
    let (code, out, _) = collatz(&["graph", "1500"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches(" -> ").count(), 1500);
    let (code, _, _) = collatz(&["graph", "200001"]);
    assert_eq!(code, 1);
}
