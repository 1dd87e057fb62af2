//! Integration tests over the shipped example corpus: every exit code path
//! plus the parallel/sequential determinism guarantee.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcurv"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// JSON report with the non-deterministic timing field removed.
fn stripped(path: &PathBuf) -> String {
    let text = std::fs::read_to_string(path).expect("report written");
    text.lines()
        .filter(|l| !l.contains("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn scan_trivial_exits_zero() {
    let out = run(&["scan", data("q_cubed.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("consistent_with_trivial"));
}

#[test]
fn scan_nontrivial_exits_ten() {
    let out = run(&["scan", data("const_two.json").to_str().unwrap()]);
    assert_eq!(code(&out), 10);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("nontrivial_heuristic"));
    // 49 good places in 1..50 fail (n = 1 is a bad place for no entry, all
    // good places differ from the identity)
    assert!(text.matches("curvature differs").count() >= 49);
}

#[test]
fn scan_malformed_exits_two() {
    let out = run(&["scan", data("malformed.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn scan_missing_file_exits_two() {
    let out = run(&["scan", data("no_such_file.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_no_good_places_exits_three() {
    let out = run(&[
        "scan",
        data("pole_at_q1.json").to_str().unwrap(),
        "--range",
        "1:1",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn scan_bad_range_exits_two() {
    let out = run(&[
        "scan",
        data("q_cubed.json").to_str().unwrap(),
        "--range",
        "5:2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn galois_diagonal_reports_lattice() {
    let out = run(&["galois-diagonal", data("diag_2_2q_q3.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("torus dimension 1"));
    assert!(text.contains("[1, -1, 0]"));
    assert!(text.contains("[0, 0, 1]"));
    assert!(text.contains("0 failures"));
}

#[test]
fn galois_out_of_range_exits_four() {
    let out = run(&[
        "galois-diagonal",
        data("diag_out_of_range.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
}

#[test]
fn deform_unipotent_echoes_matrix() {
    let out = run(&["deform", data("diff_unipotent.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[1, q - 1]"));
    assert!(text.contains("[0, 1]"));
}

#[test]
fn specialize_roundtrips_deformation() {
    let out = run(&[
        "specialize",
        data("deformed_unipotent.json").to_str().unwrap(),
        "--q-val",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[0, 1/x]"));
    assert!(text.contains("[0, 0]"));
}

#[test]
fn specialize_pole_exits_five() {
    let out = run(&[
        "specialize",
        data("pole_at_q1.json").to_str().unwrap(),
        "--q-val",
        "1",
    ]);
    assert_eq!(code(&out), 5);
}

#[test]
fn diff_scan_half_witness_exits_ten() {
    let out = run(&["diff-scan", data("diff_half.json").to_str().unwrap()]);
    assert_eq!(code(&out), 10);
}

#[test]
fn theta_solve_reports_certified_balls() {
    let out = run(&["theta-solve", data("theta_qexp.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("residual contains zero: true"));
}

#[test]
fn theta_solve_resonant_exits_five() {
    let out = run(&["theta-solve", data("theta_resonant.json").to_str().unwrap()]);
    assert_eq!(code(&out), 5);
}

#[test]
fn parallel_and_sequential_reports_identical() {
    // acceptance: scans over the corpus must be byte-identical modulo timing
    let dir = std::env::temp_dir().join(format!("qcurv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, expect) in [
        ("q_cubed.json", 0),
        ("const_two.json", 10),
        ("deformed_unipotent.json", 0),
    ] {
        let seq = dir.join(format!("seq-{name}"));
        let par = dir.join(format!("par-{name}"));
        let out = run(&[
            "scan",
            data(name).to_str().unwrap(),
            "--json",
            seq.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), expect, "{name} sequential");
        let out = run(&[
            "scan",
            data(name).to_str().unwrap(),
            "--parallel",
            "--json",
            par.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), expect, "{name} parallel");
        assert_eq!(stripped(&seq), stripped(&par), "{name} report differs");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exclude_n1_drops_first_place() {
    let out = run(&[
        "scan",
        data("q_cubed.json").to_str().unwrap(),
        "--exclude-n1",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("places 2..=50"));
}
