use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tropkit::io::{parse_json, to_pretty};

const SQUARE: &str = r#"{"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}"#;
const TRIANGLE: &str = r#"{"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}"#;
const LINE: &str = r#"{"dim": 2, "cones": [
    {"generators": [[1, 0]], "weight": "1"},
    {"generators": [[0, 1]], "weight": "1"},
    {"generators": [[-1, -1]], "weight": "1"}]}"#;
const BENT_LINE: &str = r#"{"dim": 2, "cones": [
    {"generators": [[1, 0]], "weight": "1"},
    {"generators": [[0, 1]], "weight": "1"},
    {"generators": [[-1, -1]], "weight": "2"}]}"#;

fn tropkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropkit"))
        .args(args)
        .env_remove("TROPKIT_SEED")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = tropkit(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let v = parse_json(&text).unwrap();
    // Every emitted object re-parses to the same value and re-serializes identically.
    assert_eq!(to_pretty(&v), text);
    v
}

fn code(args: &[&str]) -> i32 {
    tropkit(args).status.code().expect("exit code")
}

#[test]
fn documented_examples() {
    assert_eq!(ok_json(&["bkk", "x+y+1", "x+y+1"]), json!({"count": 1}));
    assert_eq!(
        ok_json(&["newton", "y^2 + 3 + 5*x^2 + x^3"]),
        json!({"dim": 2, "vertices": [[0, 0], [0, 2], [3, 0]]})
    );
    assert_eq!(
        ok_json(&["pascal-check", "--polytope", SQUARE]),
        json!({"residual": [0, 0], "ok": true})
    );
}

#[test]
fn polytope_commands() {
    let sum = ok_json(&["minkowski", "--polytope", SQUARE, "--polytope", TRIANGLE]);
    assert_eq!(
        sum,
        json!({"dim": 2, "vertices": [[0, 0], [0, 2], [1, 2], [2, 0], [2, 1]]})
    );
    let sum_text = sum.to_string();
    assert_eq!(
        ok_json(&["volume", "--polytope", &sum_text]),
        json!({"volume": "7/2"})
    );
    assert_eq!(
        ok_json(&["volume", "--polytope", TRIANGLE, "--oracle"]),
        json!({"volume": "1/2", "ehrhart_oracle": "1/2", "agree": true})
    );
    assert_eq!(
        ok_json(&["mixedvol", "--polytope", SQUARE, "--polytope", TRIANGLE]),
        json!({"mixed_volume": "1"})
    );

    let fan = ok_json(&["normalfan", "--polytope", TRIANGLE]);
    assert_eq!(fan["cones"].as_array().unwrap().len(), 3);
    assert!(fan["cones"][0].get("weight").is_none());
    let fan_text = fan.to_string();
    assert_eq!(
        ok_json(&["balance-check", "--fan", &fan_text]),
        json!({"balanced": true})
    );
}

#[test]
fn fan_commands() {
    let t = ok_json(&["tropical", "x + y + 1"]);
    assert_eq!(
        parse_json(LINE).unwrap()["cones"].as_array().unwrap().len(),
        t["cones"].as_array().unwrap().len()
    );
    let t_text = t.to_string();
    assert_eq!(
        ok_json(&["equiv", "--fan", &t_text, "--fan", LINE]),
        json!({"equivalent": true})
    );
    assert_eq!(
        ok_json(&["balance-check", "--fan", &t_text]),
        json!({"balanced": true})
    );
    assert_eq!(
        ok_json(&["balance-check", "--fan", BENT_LINE]),
        json!({"balanced": false})
    );
    assert_eq!(
        ok_json(&[
            "trop-intersect",
            "--fan",
            LINE,
            "--fan",
            LINE,
            "--verify-shifts",
            "5"
        ]),
        json!({"intersection_number": "1"})
    );

    let doubled = ok_json(&["fan-sum", "--fan", LINE, "--fan", LINE]);
    assert!(doubled["cones"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["weight"] == json!("2")));
    let negated = LINE.replace("\"1\"", "\"-1\"");
    assert_eq!(
        ok_json(&["fan-sum", "--fan", LINE, "--fan", &negated]),
        json!({"dim": 2, "cones": []})
    );
    assert_eq!(
        ok_json(&[
            "trop-intersect",
            "--fan",
            &doubled.to_string(),
            "--fan",
            LINE
        ]),
        json!({"intersection_number": "2"})
    );
}

#[test]
fn bkk_and_hilbert() {
    assert_eq!(
        ok_json(&[
            "bkk",
            "1 + x*y",
            "1 + x*y^-1",
            "--via-fans",
            "--verify-shifts",
            "5"
        ]),
        json!({"count": 2, "via_fans": 2})
    );
    let dense3 = "g + g*x + g*y + g*x^2 + g*x*y + g*y^2 + g*x^3 + g*x^2*y + g*x*y^2 + g*y^3";
    assert_eq!(
        ok_json(&["bkk", dense3, "x + y + 1", "--via-fans"]),
        json!({"count": 3, "via_fans": 3})
    );
    let poly_json = r#"{"n": 2, "terms": [{"exp": [1, 0], "coef": "1"}, {"exp": [0, 1], "coef": "generic"}, {"exp": [0, 0], "coef": "-1/2"}]}"#;
    assert_eq!(ok_json(&["bkk", poly_json, "x+y+1"]), json!({"count": 1}));

    let basis = format!("[{SQUARE}, {TRIANGLE}]");
    assert_eq!(
        ok_json(&["hilbert", "--basis", &basis]),
        json!({"hilbert": [1, 2, 1], "poincare": true, "volume_polynomial": {"x1^2": "1", "x1*x2": "2", "x2^2": "1/2"}})
    );
}

#[test]
fn exit_codes() {
    // Domain errors.
    assert_eq!(code(&["mixedvol", "--polytope", SQUARE]), 1);
    assert_eq!(
        code(&[
            "normalfan",
            "--polytope",
            r#"{"dim": 2, "vertices": [[0, 0], [1, 1]]}"#
        ]),
        1
    );
    assert_eq!(
        code(&["trop-intersect", "--fan", BENT_LINE, "--fan", LINE]),
        1
    );
    assert_eq!(code(&["bkk", "x+y+z", "x+y+z", "x+y+z", "--via-fans"]), 1);
    assert_eq!(code(&["newton", "x - x"]), 1);
    // Parse errors and usage.
    assert_eq!(code(&["newton", "x + + y"]), 2);
    assert_eq!(code(&["newton", "x + y1"]), 2);
    assert_eq!(code(&["volume", "--polytope", "{\"dim\": 2,"]), 2);
    assert_eq!(
        code(&["volume", "--polytope", r#"{"dim": 2, "vertices": [[0]]}"#]),
        2
    );
    assert_eq!(code(&["volume", "--polytope", "/nonexistent/p.json"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(
        code(&["volume", "--polytope", SQUARE, "--format", "svg"]),
        2
    );
    assert_eq!(code(&["trop-intersect", "--fan", LINE]), 2);
    assert_eq!(code(&["volume", "--polytope", SQUARE, "--budget", "0"]), 2);
    // Resource errors.
    let big = r#"{"dim": 3, "vertices": [[0, 0, 0], [90, 0, 0], [0, 90, 0], [0, 0, 90]]}"#;
    assert_eq!(
        code(&["volume", "--polytope", big, "--oracle", "--budget", "1000"]),
        3
    );
    // Diagrams need the plane.
    let cube = r#"{"dim": 3, "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]}"#;
    assert_eq!(
        code(&["normalfan", "--polytope", cube, "--format", "svg"]),
        1
    );

    let err = tropkit(&["newton", "x + y1"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("offset 5"));
}

#[test]
fn seeded_runs_are_identical() {
    let args = [
        "bkk",
        "g + x^2*y + x*y^-3 + y^4",
        "x^-2 + g*y + x^3*y^2",
        "--via-fans",
        "--verify-shifts",
        "3",
        "--seed",
        "77",
    ];
    let a = tropkit(&args);
    let b = tropkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let with_env = Command::new(env!("CARGO_BIN_EXE_tropkit"))
        .args(&args[..args.len() - 2])
        .env("TROPKIT_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(with_env.stdout, a.stdout);
}

#[test]
fn files_stdin_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("square.json");
    std::fs::write(&p, SQUARE).unwrap();
    let poly = dir.path().join("f.txt");
    std::fs::write(&poly, "x + y + 1\n").unwrap();
    let out_path = dir.path().join("vol.json");

    let out = tropkit(&[
        "volume",
        "--polytope",
        p.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        parse_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap(),
        json!({"volume": "1"})
    );

    let at = format!("@{}", poly.display());
    assert_eq!(ok_json(&["bkk", &at, &at]), json!({"count": 1}));

    let mut child = Command::new(env!("CARGO_BIN_EXE_tropkit"))
        .args(["volume", "--polytope", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(TRIANGLE.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(
        parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap(),
        json!({"volume": "1/2"})
    );
}

#[test]
fn text_reports() {
    let out = tropkit(&["tropical", "x + y + 1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("weight 1 on cone{(1, 0)}"));
    let out = tropkit(&[
        "hilbert",
        "--basis",
        &format!("[{TRIANGLE}]"),
        "--format",
        "text",
    ]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("hilbert function [1, 1, 1]"));
}

#[test]
fn diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for path in [&a, &b] {
        let out = tropkit(&[
            "tropical",
            "x + y + 1",
            "--format",
            "svg",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("stroke-width=\"3\"").count(), 3);

    let polygon =
        String::from_utf8(tropkit(&["newton", "y^2 + 3 + 5*x^2 + x^3", "--format", "svg"]).stdout)
            .unwrap();
    assert_eq!(polygon.matches("<polygon").count(), 1);
    assert_eq!(polygon.matches("r=\"4\"").count(), 3);

    let fan =
        String::from_utf8(tropkit(&["normalfan", "--polytope", SQUARE, "--format", "svg"]).stdout)
            .unwrap();
    assert_eq!(fan.matches("<polygon").count(), 4);
}
