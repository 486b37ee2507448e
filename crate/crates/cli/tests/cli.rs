use std::path::{Path, PathBuf};
use std::process::Command;

use laddermod_cli::format::{parse_module, parse_morphism, print_module, print_morphism};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_laddermod"));
    cmd.args(args).env_remove("LADDERMOD_FIELD");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn p(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn golden_files_round_trip() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let printed = match path.extension().and_then(|e| e.to_str()) {
            Some("lmod") => print_module(&parse_module(&text, None).unwrap()),
            Some("lmor") => print_morphism(&parse_morphism(&text, None).unwrap()),
            _ => continue,
        };
        assert_eq!(printed, text, "{}", path.display());
    }
}

#[test]
fn barcode_listing() {
    let (code, out, _) = run(&["barcode", &p("running_v.lmod")]);
    assert_eq!(code, 0);
    assert_eq!(out, "[0,4] [1,7] [4,4]\n");
    let (_, out, _) = run(&["barcode", &p("zero.lmod")]);
    assert_eq!(out, "\n");
    let (_, out, _) = run(&["barcode", &p("running.lmor")]);
    assert_eq!(out, "domain: [0,4] [1,7] [4,4]\ncodomain: [1,5] [1,6]\n");
    let (_, out, _) = run(&["barcode", "--text", &p("running_w.lmod")]);
    assert!(out.contains("[1,6]  ######\n"));
}

#[test]
fn barcode_svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("v.svg");
    let (code, _, _) = run(&[
        "barcode",
        &p("nested_bars.lmod"),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let s = std::fs::read_to_string(svg).unwrap();
    assert!(s.contains(r#"version="1.1""#));
    assert_eq!(s.matches("<rect").count(), 4);
}

#[test]
fn decompose_running_example() {
    let (code, out, _) = run(&["decompose", &p("running.lmor"), "--delta", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("nestedness: domain 3, codomain inf"));
    assert!(out.contains("precondition 2*delta < min nestedness: holds for delta 1"));
    assert!(out.contains("delta 1: certified"));
    assert!(out.contains("decomposition: R [0,4]->[0,4], R [1,7]->[0,5], I+ [4,4]\n"));
}

#[test]
fn decompose_counterexample_fails_with_exit_2() {
    let (code, out, _) = run(&["decompose", &p("nested.lmor")]);
    assert_eq!(code, 2);
    assert!(out.contains("nestedness: domain 2, codomain inf"));
    assert!(out.contains("fails (decomposition not guaranteed)"));
    assert!(out.contains("reduction failed: blocking entry"));
    assert!(out.contains("row [0,5]"));
    assert!(out.contains("column [2,5]"));
}

#[test]
fn decompose_coarse() {
    let (code, out, _) = run(&[
        "decompose",
        &p("running.lmor"),
        "--delta",
        "1",
        "--q",
        "2",
        "--variant",
        "both",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("coarse variant both, q 2: induced delta 2"));
    assert!(out.contains("decomposition: "));
    assert!(out.contains("coarse matching"));
    let (code, _, err) = run(&["decompose", &p("running.lmor"), "--delta", "1", "--q", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("odd"));
    let (code, out, _) = run(&[
        "decompose",
        &p("running.lmor"),
        "--delta",
        "1",
        "--q",
        "1",
        "--refine",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("grid refined"));
}

#[test]
fn match_running_example() {
    let (code, out, _) = run(&["match", &p("running.lmor")]);
    assert_eq!(code, 0);
    assert!(out.contains("ladder matching (forward): {([0,4],[1,5]), ([1,7],[1,6])}\n"));
    assert!(out.contains("ladder matching (inverse): {([1,5],[0,4]), ([1,6],[1,7])}\n"));
    assert_eq!(out.matches("  cost: 1\n").count(), 2);
}

#[test]
fn match_compare_bl_example() {
    let (code, out, _) = run(&[
        "match",
        "--compare",
        &p("swap_phi.lmor"),
        &p("swap_psi.lmor"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out.matches("bl matching (forward): {([0,2],[1,3]), ([0,3],[0,3])}")
            .count(),
        2
    );
    assert!(out.contains("ladder matching (forward): {([0,2],[0,3]), ([0,3],[1,3])}"));
    assert!(out.contains("bl matchings identical across inputs: yes"));
    assert!(out.contains("ladder matchings identical across inputs: no"));
}

#[test]
fn match_identity_costs_nothing() {
    let (_, out, _) = run(&["match", "--method", "bl", &p("identity.lmor")]);
    assert!(out.contains("  cost: 0\n"));
    assert!(!out.contains("ladder"));
}

#[test]
fn verify_certificates() {
    let (code, out, _) = run(&["verify", &p("running.lmor"), "--delta", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("delta 1: certified"));
    let (code, out, _) = run(&["verify", &p("running.lmor"), "--delta", "0"]);
    assert_eq!(code, 2);
    assert!(out.contains("not certified"));
    let (code, out, _) = run(&["verify", &p("identity.lmor"), "--scan-delta-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "smallest certified delta: 0\n");
    let (_, out, _) = run(&["verify", &p("running.lmor"), "--scan-delta-max", "3"]);
    assert_eq!(out, "smallest certified delta: 1\n");
    let (code, _, err) = run(&["verify", &p("nested.lmor"), "--delta", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("inverse"));
}

#[test]
fn verify_reports_failing_triangle() {
    let text = std::fs::read_to_string(data("running.lmor")).unwrap();
    let broken = text.replace("comp 2 [1/2 -1/2; 0 1]", "comp 2 [1/2 -1/2; 1 1]");
    assert_ne!(broken, text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.lmor");
    std::fs::write(&path, broken).unwrap();
    let (code, _, err) = run(&["verify", path.to_str().unwrap(), "--delta", "1"]);
    assert_eq!(code, 1, "a non-natural inverse is rejected while parsing");
    assert!(err.contains("line"));
}

#[test]
fn input_errors_exit_1_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.lmod");
    std::fs::write(
        &path,
        "laddermod-module v1\nfield rational\nstart 0\ndims 1 1\nmap 0 [1 x]\n",
    )
    .unwrap();
    let (code, _, err) = run(&["barcode", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 5"), "{err}");
    let (code, _, _) = run(&["barcode", "/nonexistent/file.lmod"]);
    assert_eq!(code, 1);
}

#[test]
fn field_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.lmod");
    std::fs::write(&path, "laddermod-module v1\nstart 0\ndims 1 1\nmap 0 [7]\n").unwrap();
    let (code, out, _) = run_env(
        &["barcode", path.to_str().unwrap()],
        &[("LADDERMOD_FIELD", "prime 7")],
    );
    assert_eq!(code, 0);
    assert_eq!(out, "[0,0] [1,1]\n");
    let (_, out, _) = run_env(
        &["barcode", path.to_str().unwrap()],
        &[("LADDERMOD_FIELD", "rational")],
    );
    assert_eq!(out, "[0,1]\n");
    let (code, _, _) = run_env(
        &["barcode", path.to_str().unwrap()],
        &[("LADDERMOD_FIELD", "prime 9")],
    );
    assert_eq!(code, 1);
}
