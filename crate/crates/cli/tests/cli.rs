use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BALL: &str = r#"{"type":"ellipsoid","center":[0,0,0],"shape":[[1,0,0],[0,1,0],[0,0,1]]}"#;
const CUBE: &str = r#"{"type":"polytope","vertices":[[-1,-1,-1],[1,-1,-1],[-1,1,-1],[1,1,-1],[-1,-1,1],[1,-1,1],[-1,1,1],[1,1,1]]}"#;
const ELLIPSE: &str = r#"{"type":"ellipsoid","center":[0.5,0],"shape":[[0.25,0],[0,1]]}"#;
const PARABOLOID: &str = r#"{"type":"paraboloid","axes":[1,1]}"#;

fn body(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn tomoslice(args: &[&str], body: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomoslice"))
        .args(args)
        .arg("--body")
        .arg(body)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn detect_ball_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["detect", "--seed", "42"], &body(&dir, "ball.json", BALL));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["verdict"], "accept");
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["config"]["body"]["type"], "ellipsoid");
    assert!(v["report"]["consistency"]["max_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn detect_cube_rejects_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["detect"], &body(&dir, "cube.json", CUBE));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["report"]["verdict"], "reject");
}

#[test]
fn algfit_ellipse_reports_square_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["algfit", "--xi", "1,0", "--m-max", "3"], &body(&dir, "e.json", ELLIPSE));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["m"], 2);
    assert_eq!(v["report"]["degree"], 2);
    let roots = &v["report"]["search"]["accepted"]["root_report"];
    assert_eq!(roots["verdict"], "conforms");
    assert!((roots["h_plus"].as_f64().unwrap() - 2.5).abs() < 1e-12);
}

#[test]
fn algfit_cube_reports_none() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["algfit", "--xi", "1,1,1", "--format", "csv"], &body(&dir, "cube.json", CUBE));
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config {"));
    assert_eq!(lines.next(), Some("m,D,residual"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn profile_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("profile.csv");
    let out = tomoslice(
        &["profile", "--xi", "0,0,2", "--grid", "20", "--margin", "0", "--format", "csv", "--out", out_path.to_str().unwrap()],
        &body(&dir, "ball.json", BALL),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(out_path).unwrap();
    assert!(!text.contains('\r'));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows[0], "t,A");
    assert_eq!(rows.len(), 21);
    let first: Vec<f64> = rows[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first, vec![-1.0, 0.0]);
}

#[test]
fn moments_of_the_cube() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["moments", "--k", "0", "--directions", "30"], &body(&dir, "cube.json", CUBE));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["passed"], true);
    let c = v["report"]["fit_coefficients"][0].as_f64().unwrap();
    assert!((c - 8.0).abs() < 1e-10);
}

#[test]
fn quadric_check_on_the_paraboloid_axis() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["quadric-check", "--xi", "0,0,1", "--xi", "1,0,0"], &body(&dir, "p.json", PARABOLOID));
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["report"].clone();
    assert_eq!(rows[0]["status"], "sufficient");
    assert_eq!(rows[0]["window"], serde_json::json!([0.5, 4.0]));
    // A = πt: the first power already fits a line
    assert_eq!(rows[0]["minimal"], serde_json::json!([1, 1]));
    assert_eq!(rows[1]["status"], "unbounded-slice");
}

#[test]
fn quadric_check_with_only_unbounded_slices_is_negative() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["quadric-check", "--xi", "0,1,0"], &body(&dir, "p.json", PARABOLOID));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quadric_check_needs_a_quadric() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["quadric-check"], &body(&dir, "ball.json", BALL));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let bad = body(&dir, "bad.json", r#"{"type":"ellipsoid","centre":[0,0],"shape":[[1,0],[0,1]]}"#);
    let out = tomoslice(&["detect"], &bad);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("`centre`"), "{err}");
}

#[test]
fn mistyped_value_names_its_key() {
    let dir = tempfile::tempdir().unwrap();
    let bad = body(&dir, "bad.json", r#"{"type":"polytope","vertices":[[0,0],[1,"x"],[0,1]]}"#);
    let out = tomoslice(&["detect"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`vertices`"));
}

#[test]
fn dimension_mismatch_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["profile", "--xi", "1,0"], &body(&dir, "ball.json", BALL));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("dimension mismatch"));
}

#[test]
fn infinite_support_direction_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = tomoslice(&["asymptote", "--xi", "0,0,1"], &body(&dir, "p.json", PARABOLOID));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_flags_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let ball = body(&dir, "ball.json", BALL);
    for args in [
        vec!["profile"],
        vec!["profile", "--xi", "1,a,0"],
        vec!["profile", "--xi", "1,0,0", "--margin", "0.7"],
        vec!["detect", "--tol", "-1"],
        vec!["detect", "--format", "xml"],
        vec!["asymptote", "--xi", "1,0,0", "--window", "0.2,0.1"],
    ] {
        assert_eq!(tomoslice(&args, &ball).status.code(), Some(1), "{args:?}");
    }
    let missing = Command::new(env!("CARGO_BIN_EXE_tomoslice")).arg("detect").output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn thread_cap_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let ball = body(&dir, "ball.json", BALL);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_tomoslice"))
            .args(["detect", "--body", ball.to_str().unwrap()])
            .env("TOMOSLICE_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("0").status.code(), Some(1));
    let (one, three) = (run("1"), run("3"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
}
