//! End-to-end CLI tests driving the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_gausspf")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("GP_THREADS")
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("gausspf-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn zero_spec(l: usize) -> PathBuf {
    let n = 2 * l;
    let zero_row: Vec<[f64; 2]> = vec![[0.0, 0.0]; n];
    let m: Vec<Vec<[f64; 2]>> = vec![zero_row; n];
    let json = serde_json::json!({"L": l, "kind": "generic", "M": m});
    write_temp(&format!("zero_{l}.json"), &json.to_string())
}

#[test]
fn element_identity_in_z_and_x() {
    let spec = zero_spec(1);
    let out = run(&[
        "element",
        "--spec",
        spec.to_str().unwrap(),
        "--bra",
        "+",
        "--ket",
        "+",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"][0], 1.0);
    assert_eq!(v["value"][1], 0.0);
    assert_eq!(v["sign_pair"], "canonical(L=1)");

    let out = run(&[
        "element",
        "--spec",
        spec.to_str().unwrap(),
        "--basis",
        "x",
        "--bra",
        "+",
        "--ket",
        "-",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"][0], 0.0);
    assert_eq!(v["value"][1], 0.0);
}

#[test]
fn element_runs_are_byte_identical() {
    let spec = zero_spec(2);
    let args = [
        "element",
        "--spec",
        spec.to_str().unwrap(),
        "--basis",
        "y,x",
        "--bra",
        "+-",
        "--ket",
        "-+",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_identity_l1() {
    let spec = zero_spec(1);
    let out = run(&["table", "--spec", spec.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "bra,-_re,-_im,+_re,+_im");
    assert_eq!(lines[1], "-,1e0,0e0,0e0,0e0");
    assert_eq!(lines[2], "+,0e0,0e0,1e0,0e0");
}

#[test]
fn table_parity_forbidden_cells_are_exact_zero() {
    let spec = zero_spec(2);
    let out = run(&[
        "table",
        "--spec",
        spec.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // identity table: off-diagonal entries are exactly zero, including all
    // parity-forbidden cells
    for b in 0..4 {
        for k in 0..4 {
            let cell = &v["values"][b][k];
            if b != k {
                assert_eq!(cell[0], 0.0);
                assert_eq!(cell[1], 0.0);
            }
        }
    }
}

#[test]
fn usage_errors_exit_1() {
    let out = run(&["element", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_spec_exits_2() {
    // violates the Xi-antisymmetry constraint
    let path = write_temp(
        "invalid.json",
        r#"{"L": 1, "kind": "generic", "M": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]]}"#,
    );
    let out = run(&[
        "element",
        "--spec",
        path.to_str().unwrap(),
        "--bra",
        "+",
        "--ket",
        "+",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ill_conditioned_t22_exits_3() {
    let json = serde_json::json!({
        "L": 2,
        "kind": "particle_conserving",
        "A": [[[40.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-40.0, 0.0]]]
    });
    let path = write_temp("hard_projector.json", &json.to_string());
    let out = run(&[
        "element",
        "--spec",
        path.to_str().unwrap(),
        "--bra",
        "++",
        "--ket",
        "++",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn branch_cut_exits_4() {
    // A = diag(i*pi) puts a T22 eigenvalue on the negative real axis
    let json = serde_json::json!({
        "L": 1,
        "kind": "particle_conserving",
        "A": [[[0.0, std::f64::consts::PI]]]
    });
    let path = write_temp("branch.json", &json.to_string());
    let out = run(&[
        "element",
        "--spec",
        path.to_str().unwrap(),
        "--bra",
        "+",
        "--ket",
        "+",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_passes_and_fails_by_tolerance() {
    let out = run(&["verify", "--sites", "2", "--trials", "3", "--seed", "7"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["sigma_z"]["max_dev"].as_f64().unwrap() < 1e-9);

    // absurdly tight tolerance forces a verification failure: exit 5
    let out = run(&[
        "verify", "--sites", "2", "--trials", "3", "--seed", "7", "--tol", "1e-18",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn verify_respects_gp_threads() {
    let single = Command::new(bin())
        .args(["verify", "--sites", "2", "--trials", "4", "--seed", "3"])
        .env("GP_THREADS", "1")
        .output()
        .unwrap();
    let multi = Command::new(bin())
        .args(["verify", "--sites", "2", "--trials", "4", "--seed", "3"])
        .env("GP_THREADS", "4")
        .output()
        .unwrap();
    assert!(single.status.success());
    assert!(multi.status.success());
    assert_eq!(
        single.stdout, multi.stdout,
        "reports are thread-count independent"
    );
}

#[test]
fn signs_census_counts_and_check() {
    for (l, expect) in [("1", 2u64), ("2", 8), ("3", 32)] {
        let out = run(&["signs", "--sites", l, "--check"]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["count"].as_u64().unwrap(), expect);
        assert_eq!(v["pairs"].as_array().unwrap().len() as u64, expect);
        assert_eq!(v["checked"], true);
    }
    let out = run(&["signs", "--sites", "9"]);
    assert_eq!(out.status.code(), Some(2), "enumeration guard");
}

#[test]
fn algebra_report() {
    let out = run(&["algebra", "--sites", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["closure_dim"], 15);
    assert_eq!(v["expected"], 15);
    assert_eq!(v["pass"], true);
    assert!(v["overlaps"].as_array().unwrap().len() == 3);

    let out = run(&["algebra", "--sites", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["closure_dim"], 6);
    assert!(v["l2_table_max_dev"].as_f64().unwrap() < 1e-10);
}

#[test]
fn probability_closed_forms() {
    let g0 = write_temp("g_zero.json", r#"{"G": [[0.0, 0.0], [0.0, 0.0]]}"#);
    let out = run(&["probability", "--spec", g0.to_str().unwrap(), "--ket", "+-"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["probability"].as_f64().unwrap(), 0.25);

    // G = I is the fully occupied direction
    let gi = write_temp("g_id.json", r#"{"G": [[1.0, 0.0], [0.0, 1.0]]}"#);
    let out = run(&["probability", "--spec", gi.to_str().unwrap(), "--ket", "++"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["probability"].as_f64().unwrap(), 1.0);
    let out = run(&["probability", "--spec", gi.to_str().unwrap(), "--ket", "-+"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["probability"].as_f64().unwrap(), 0.0);
}

#[test]
fn output_file_flag() {
    let spec = zero_spec(1);
    let dest = std::env::temp_dir().join("gausspf-cli-tests/out_element.json");
    let _ = std::fs::remove_file(&dest);
    let out = run(&[
        "element",
        "--spec",
        spec.to_str().unwrap(),
        "--bra",
        "+",
        "--ket",
        "+",
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["value"][0], 1.0);
}
