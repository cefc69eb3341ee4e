//! End-to-end tests of the binary: input sources, formats, exit codes.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qmball"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn reads_expression_from_stdin() {
    let mut child = bin()
        .args(["normalize", "--m", "1", "--n", "1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"zs[1,1]*z[1,1]")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "q^2 * z[1,1]*zs[1,1] + (1 - q^2)\n"
    );
}

#[test]
fn reads_expression_from_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("qmball_cli_test_expr.txt");
    std::fs::write(&path, "z[1,1] * f0\n").unwrap();
    let (code, stdout, _) = run(&[
        "normalize",
        "--m",
        "1",
        "--n",
        "1",
        "--file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "z[1,1]*f0\n");
    std::fs::remove_file(&path).ok();
}

#[test]
fn act_command() {
    // Fn(En(f0)) picks up the quantum-trace weight on the corner sandwich
    let (code, stdout, _) = run(&["act", "--m", "1", "--n", "1", "En Fn", "f0"]);
    assert_eq!(code, 0);
    // En f0 = -(s/(1-q^2)) z f0, then Fn of that stays finite
    assert!(stdout.contains("f0"), "{stdout}");
    // Kn on a weight vector is a pure q-power
    let (code, stdout, _) = run(&["act", "--m", "1", "--n", "1", "K1", "z[1,1]"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "q^2 * z[1,1]\n");
    // generator index out of range
    let (code, _, stderr) = run(&["act", "--m", "1", "--n", "1", "E2", "z[1,1]"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("out of range"), "{stderr}");
}

#[test]
fn json_round_trips_through_the_parser() {
    let (code, stdout, _) = run(&[
        "normalize",
        "--m",
        "2",
        "--n",
        "2",
        "--format",
        "json",
        "zs[2,1]*z[1,2] - q * z[2,2]",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert!(!terms.is_empty());
    for t in terms {
        assert!(t["coeff"].is_string());
        assert!(t["zword"].is_array());
        assert!(t["f0"].is_boolean());
        assert!(t["zsword"].is_array());
    }
}

#[test]
fn parse_errors_exit_one_with_position() {
    let (code, _, stderr) = run(&["normalize", "--m", "1", "--n", "2", "z[3,1]"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 1"), "{stderr}");
    assert!(stderr.contains("out of range"), "{stderr}");

    let (code, _, stderr) = run(&["normalize", "--m", "1", "--n", "1", "q +"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("column"), "{stderr}");
}

#[test]
fn integrate_exit_codes() {
    let (code, _, stderr) = run(&["integrate", "--m", "1", "--n", "1", "1 + f0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("finite"), "{stderr}");

    let (code, _, stderr) = run(&["integrate", "--m", "1", "--n", "1", "--q", "3/2", "f0"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("between 0 and 1"), "{stderr}");
}

#[test]
fn gram_with_q_prints_rationals() {
    let (code, stdout, _) = run(&[
        "gram", "--m", "1", "--n", "2", "--degree", "1", "--q", "1/2",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.trim_end().lines().collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        assert_eq!(line.split(", ").count(), 2);
    }
}

#[test]
fn verify_json_report() {
    let (code, stdout, _) = run(&[
        "verify",
        "--m",
        "1",
        "--n",
        "1",
        "--format",
        "json",
        "--degree-cap",
        "2",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 3);
}
