use std::path::Path;
use std::process::{Command, Output};

use telewit::io::{parse_witness, state_to_json};
use telewit::states::isotropic_state;
use telewit::witness::witness_tw_from_overlap;

fn telewit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telewit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_useful_isotropic_state() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("iso.json");
    std::fs::write(&file, state_to_json(&isotropic_state(3, 0.9).unwrap())).unwrap();
    let out = telewit(&["analyze", path_str(&file), "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["useful_for_teleportation"], true);
    let fef = v["fef"]["value"].as_f64().unwrap();
    assert!((fef - (0.9 + 0.1 / 9.0)).abs() < 1e-6, "{fef}");
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 3);
}

#[test]
fn analyze_maximally_mixed_text() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("mixed.json");
    std::fs::write(&file, state_to_json(&isotropic_state(2, 0.0).unwrap())).unwrap();
    let out = telewit(&["analyze", path_str(&file)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("useful             false"), "{text}");
    assert!(!text.contains("detected"));
}

#[test]
fn analyze_bad_trace_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let m = [[0.3, 0.0, 0.0, 0.0], [0.0, 0.2, 0.0, 0.0], [0.0, 0.0, 0.2, 0.0], [0.0, 0.0, 0.0, 0.2]];
    let matrix: Vec<Vec<[f64; 2]>> = m.iter().map(|r| r.iter().map(|&x| [x, 0.0]).collect()).collect();
    let json = serde_json::json!({"d_a": 2, "d_b": 2, "matrix": matrix});
    std::fs::write(&file, json.to_string()).unwrap();
    let out = telewit(&["analyze", path_str(&file)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("trace"), "{}", stderr(&out));
}

#[test]
fn analyze_malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("junk.json");
    std::fs::write(&file, "{\"d_a\": 2,").unwrap();
    assert_eq!(telewit(&["analyze", path_str(&file)]).status.code(), Some(2));
}

#[test]
fn analyze_missing_file_exits_1() {
    assert_eq!(telewit(&["analyze", "/nonexistent/state.json"]).status.code(), Some(1));
}

fn scan(dim: &str, f0: &str) -> Vec<Vec<String>> {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("scan.csv");
    let out = telewit(&[
        "scan-isotropic", "--dim", dim, "--f0", f0, "--beta-min", "0", "--beta-max", "1", "--steps", "101",
        "--out", path_str(&file),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("beta,overlap,tw_expectation,ppt_min_eig,schmidt_class,useful"));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn crossings(rows: &[Vec<String>], col: usize) -> Vec<(f64, f64)> {
    let num = |r: &Vec<String>, c: usize| r[c].parse::<f64>().unwrap();
    rows.windows(2)
        .filter(|w| (num(&w[0], col) >= 0.0) != (num(&w[1], col) >= 0.0))
        .map(|w| (num(&w[0], 0), num(&w[1], 0)))
        .collect()
}

#[test]
fn scan_brackets_quarter_for_qutrits() {
    let rows = scan("3", "1/3");
    assert_eq!(rows.len(), 101);
    let c = crossings(&rows, 2);
    assert_eq!(c.len(), 1);
    assert!(c[0].0 <= 0.25 && 0.25 <= c[0].1);
}

#[test]
fn scan_brackets_five_eighths() {
    let c = crossings(&scan("3", "2/3"), 2);
    assert_eq!(c.len(), 1);
    assert!(c[0].0 <= 0.625 && 0.625 <= c[0].1);
}

#[test]
fn scan_qubit_thresholds_share_cell() {
    let rows = scan("2", "0.5");
    assert_eq!(crossings(&rows, 2), crossings(&rows, 3));
}

#[test]
fn scan_rejects_bad_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = telewit(&[
        "scan-isotropic", "--dim", "3", "--f0", "0.5", "--beta-min", "0", "--steps", "1", "--out",
        path_str(&dir.path().join("x.csv")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn scan_unwritable_path_fails() {
    let out = telewit(&[
        "scan-isotropic", "--dim", "2", "--f0", "0.5", "--beta-min", "0", "--out", "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn witness_export_qubit() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w.json");
    let out = telewit(&["witness", "--dim", "2", "--f0", "0.5", "--out", path_str(&file)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("measurement settings: 3"), "{text}");
    assert!(text.contains("tomography parameters: 15"));
    let w = parse_witness(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let expect = witness_tw_from_overlap(2, 0.5).unwrap();
    assert!(w.matrix().max_abs_diff(expect.matrix()) <= 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("w.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 16);
    let xx: f64 = csv
        .lines()
        .find_map(|l| l.strip_prefix("pauli_x,pauli_x,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((xx + 0.25).abs() < 1e-12);
}

#[test]
fn witness_export_qutrit_counts() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w3.json");
    let out = telewit(&["witness", "--dim", "3", "--f0", "1/3", "--out", path_str(&file)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("measurement settings: 8"), "{text}");
    assert!(text.contains("tomography parameters: 80"));
}

#[test]
fn witness_rejects_small_f0() {
    let dir = tempfile::tempdir().unwrap();
    let out = telewit(&["witness", "--dim", "3", "--f0", "0.2", "--out", path_str(&dir.path().join("w.json"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_names_injected_fault() {
    let out = telewit(&["verify", "--inject-fault", "eq18-sign"]);
    assert_ne!(out.status.code(), Some(0));
    let table = stdout(&out);
    let line = table.lines().find(|l| l.contains("eq18_closed_form")).unwrap();
    assert!(line.starts_with("FAIL"), "{line}");
    assert!(stderr(&out).contains("eq18_closed_form"));
}

#[test]
fn verify_table_is_deterministic_and_exit_tracks_outcomes() {
    let a = telewit(&["verify", "--seed", "7"]);
    let b = telewit(&["verify", "--seed", "7"]);
    assert_eq!(stdout(&a), stdout(&b));
    let table = stdout(&a);
    let lines: Vec<_> = table.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 10);
    let all_pass = lines.iter().all(|l| l.starts_with("PASS"));
    assert_eq!(a.status.success(), all_pass);
}
