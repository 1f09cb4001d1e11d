//! End-to-end tests of the `epistrict` binary: output schemas, format
//! parity, and the documented exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn epistrict(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epistrict"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn epistrict_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epistrict"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn states_json_reports_trit_census() {
    let out = epistrict(&["--d", "3", "--format", "json", "states"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["lagrangian_count"], 4);
    assert_eq!(doc["state_count"], 12);
    let states = doc["states"].as_array().unwrap();
    assert_eq!(states.len(), 12);
    for s in states {
        assert_eq!(s["support"].as_array().unwrap().len(), 3);
        assert_eq!(s["basis"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn states_d5_has_thirty_states() {
    let out = epistrict(&["--d", "5", "--format", "json", "states"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["lagrangian_count"], 6);
    assert_eq!(doc["state_count"], 30);
}

#[test]
fn states_formats_carry_identical_data() {
    let json = stdout_json(&epistrict(&["--d", "3", "--format", "json", "states"]));
    let ascii_out = epistrict(&["--d", "3", "--format", "ascii", "states"]);
    let ascii = String::from_utf8_lossy(&ascii_out.stdout).to_string();
    let csv_out = epistrict(&["--d", "3", "--format", "csv", "states"]);
    let csv = String::from_utf8_lossy(&csv_out.stdout).to_string();

    // ascii: 12 grids of 3 lines each, every grid marking exactly 3 cells;
    // grid row r is momentum 2 - r, column c is position c
    let grid_lines: Vec<&str> = ascii
        .lines()
        .filter(|l| l.len() == 3 && l.chars().all(|c| c == 'X' || c == '.'))
        .collect();
    assert_eq!(grid_lines.len(), 36);
    let json_states = json["states"].as_array().unwrap();
    for (i, chunk) in grid_lines.chunks(3).enumerate() {
        let mut marked = Vec::new();
        for (row, line) in chunk.iter().enumerate() {
            for (col, ch) in line.chars().enumerate() {
                if ch == 'X' {
                    marked.push(serde_json::json!([col as u64, (2 - row) as u64]));
                }
            }
        }
        marked.sort_by_key(|v| (v[0].as_u64().unwrap(), v[1].as_u64().unwrap()));
        let mut support = json_states[i]["support"].as_array().unwrap().clone();
        support.sort_by_key(|v| (v[0].as_u64().unwrap(), v[1].as_u64().unwrap()));
        assert_eq!(marked, support, "state {i} grid disagrees with json support");
    }

    // csv: one header plus one row per state
    let csv_lines: Vec<&str> = csv.lines().collect();
    assert_eq!(csv_lines.len(), 13);
    assert_eq!(csv_lines[0], "index,basis,valuation,support");
}

#[test]
fn check_builtin_passes_and_names_objects() {
    let out = epistrict(&["--d", "3", "--format", "json", "check"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    for axiom in ["F", "M", "A", "U", "C"] {
        assert_eq!(doc["axioms"][axiom], true, "axiom {axiom}");
    }
    assert_eq!(doc["groupoid"]["objects"], 3);
    assert_eq!(doc["groupoid"]["arrows"], 9);
    assert_eq!(
        doc["groupoid"]["object_labels"],
        serde_json::json!(["1", "4", "7"])
    );
}

#[test]
fn check_mutated_algebra_exits_one_and_names_axiom() {
    let field = epistrict::PrimeField::new(3).unwrap();
    let alg = epistrict::relcat::build_spek_algebra(field);
    let mut text = epistrict::relcat::write_algebra(&alg);
    // drop the first multiplication pair
    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(1);
    text = lines.join("\n");
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();

    let out = epistrict(&["--d", "3", "check", "--algebra", path]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("axioms failed"), "stderr: {stderr}");
    // the report still names which axioms broke
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"));
}

#[test]
fn check_unparseable_algebra_exits_two() {
    let mut empty = tempfile::NamedTempFile::new().unwrap();
    empty.write_all(b"").unwrap();
    let out = epistrict(&["check", "--algebra", empty.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);

    let mut garbage = tempfile::NamedTempFile::new().unwrap();
    garbage.write_all(b"not a relation\n").unwrap();
    let out = epistrict(&["check", "--algebra", garbage.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);

    let out = epistrict(&["check", "--algebra", "/nonexistent/path.alg"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn check_exports_groupoid_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spek3.grpd");
    let out = epistrict(&["--d", "3", "check", "--export-groupoid", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let objs = text.lines().filter(|l| l.starts_with("OBJ ")).count();
    let arrs = text.lines().filter(|l| l.starts_with("ARR ")).count();
    let cmps = text.lines().filter(|l| l.starts_with("CMP ")).count();
    assert_eq!((objs, arrs, cmps), (3, 9, 27));
}

#[test]
fn quantize_position_state_is_basis_projector() {
    let out = epistrict(&["--d", "3", "--format", "json", "quantize", "--state", "1,0;0,0"]);
    let doc = stdout_json(&out);
    let states = doc["states"].as_array().unwrap();
    assert_eq!(states.len(), 1);
    let proj = &states[0]["projector"];
    assert_eq!(proj["dim"], 3);
    let entries = proj["entries"].as_array().unwrap();
    for (k, e) in entries.iter().enumerate() {
        let expect = if k == 0 { 1.0 } else { 0.0 };
        assert!((e[0].as_f64().unwrap() - expect).abs() < 1e-12);
        assert!(e[1].as_f64().unwrap().abs() < 1e-12);
    }
    assert_eq!(states[0]["pvm_labels"].as_array().unwrap().len(), 3);
    // wigner rows = position: support on position 0
    let w = states[0]["wigner"].as_array().unwrap();
    for (x, row) in w.iter().enumerate() {
        for cell in row.as_array().unwrap() {
            let expect = if x == 0 { 1.0 / 3.0 } else { 0.0 };
            assert!((cell.as_f64().unwrap() - expect).abs() < 1e-9);
        }
    }
}

#[test]
fn quantize_all_emits_twelve_rank_one_projectors() {
    let out = epistrict(&["--d", "3", "--format", "json", "quantize", "--all"]);
    let doc = stdout_json(&out);
    let states = doc["states"].as_array().unwrap();
    assert_eq!(states.len(), 12);
    for s in states {
        let entries = s["projector"]["entries"].as_array().unwrap();
        let dim = s["projector"]["dim"].as_u64().unwrap() as usize;
        let trace: f64 = (0..dim).map(|k| entries[k * dim + k][0].as_f64().unwrap()).sum();
        assert!((trace - 1.0).abs() < 1e-9, "rank must be one");
    }
}

#[test]
fn quantize_csv_and_ascii_formats() {
    let out = epistrict(&["--d", "3", "--format", "csv", "quantize", "--state", "1,0;0,0"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# V = span{(1,0)}"));
    assert_eq!(lines.len(), 4); // comment + 3 grid rows
    // position-0 row carries the support
    let first: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
    for v in first {
        assert!((v - 1.0 / 3.0).abs() < 1e-9);
    }

    let out = epistrict(&["--d", "3", "quantize", "--state", "1,0;0,0"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("rank 1"));
    assert!(text.contains("wigner (rows = position, cols = momentum):"));
}

#[test]
fn check_accepts_cyclic_group_algebra_file() {
    let alg = epistrict::relcat::cyclic_group_algebra(3);
    let text = epistrict::relcat::write_algebra(&alg);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    let out = epistrict(&[
        "--format",
        "json",
        "check",
        "--algebra",
        file.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["carrier"], 3);
    assert_eq!(doc["groupoid"]["objects"], 1);
    assert_eq!(doc["groupoid"]["arrows"], 3);
}

#[test]
fn quantize_rejects_non_isotropic_subspace() {
    let out = epistrict(&["--d", "3", "quantize", "--state", "1,0|0,1;0,0"]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("isotropic"), "stderr: {stderr}");
}

#[test]
fn quantize_rejects_malformed_state_spec() {
    for spec in ["1,0", "1;0", "1,0;0", "x,y;0,0"] {
        let out = epistrict(&["--d", "3", "quantize", "--state", spec]);
        assert_eq!(exit_code(&out), 2, "spec {spec:?}");
    }
}

#[test]
fn equivalence_passes_at_d3_and_d5() {
    for d in ["3", "5"] {
        let out = epistrict(&["--d", d, "--format", "json", "equivalence"]);
        assert_eq!(exit_code(&out), 0);
        let doc = stdout_json(&out);
        assert_eq!(doc["pass"], true);
        assert!(doc["max_wigner_dev"].as_f64().unwrap() < 1e-10);
        assert!(doc["max_born_dev"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn every_entry_point_rejects_even_fields_with_exit_three() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["--d", "2", "states"],
        vec!["--d", "2", "check"],
        vec!["--d", "2", "quantize", "--all"],
        vec!["--d", "2", "equivalence"],
        vec!["--d", "4", "states"],
        vec!["--d", "10", "equivalence"],
    ];
    for args in cases {
        let out = epistrict(&args);
        assert_eq!(exit_code(&out), 3, "args {args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(
            stderr.contains("division by two") && stderr.contains("characteristic 2"),
            "obstruction message missing: {stderr}"
        );
    }
    // odd composites are plain input errors, not the obstruction
    let out = epistrict(&["--d", "9", "states"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn guard_env_variable_limits_enumeration() {
    let out = epistrict_env(&["--d", "7", "states"], "EPISTRICT_GUARD", "10");
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("guard"), "stderr: {stderr}");
    // default guard admits d = 7
    let ok = epistrict(&["--d", "7", "states"]);
    assert_eq!(exit_code(&ok), 0);
}

#[test]
fn equivalence_csv_and_ascii_agree_with_json() {
    let json = stdout_json(&epistrict(&["--d", "3", "--format", "json", "equivalence"]));
    let csv_out = epistrict(&["--d", "3", "--format", "csv", "equivalence"]);
    let csv = String::from_utf8_lossy(&csv_out.stdout).to_string();
    let mut kv = std::collections::BTreeMap::new();
    for line in csv.lines().skip(1) {
        let (k, v) = line.split_once(',').unwrap();
        kv.insert(k.to_string(), v.to_string());
    }
    assert_eq!(kv["states"], json["states"].to_string());
    assert_eq!(kv["observables"], json["observables"].to_string());
    assert_eq!(kv["pass"], json["pass"].to_string());
    let ascii_out = epistrict(&["--d", "3", "equivalence"]);
    let ascii = String::from_utf8_lossy(&ascii_out.stdout);
    assert!(ascii.contains("PASS"));
}
