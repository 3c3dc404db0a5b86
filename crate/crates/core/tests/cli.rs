use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use symcone::instance::InstanceFile;
use symcone::spectral::in_cone;
use symcone::transforms::isometry_check;

fn symcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &TempDir, name: &str, contents: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn orthant_instance(dir: &TempDir) -> PathBuf {
    write(
        dir,
        "orthant.json",
        &json!({
            "algebra": {"kind": "orthant", "param": 2},
            "elements": {"x": [1, 2], "y": [2, 1], "bad": [1, -1], "start": [3, 0.5]},
            "maps": {"g": [{"type": "quad", "payload": [2, 3]}]}
        }),
    )
}

#[test]
fn metric_reports_log_four() {
    let dir = TempDir::new().unwrap();
    let inst = orthant_instance(&dir);
    let out = symcone(&["metric", "--instance", s(&inst), "--x", "x", "--y", "y"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["command"], "metric");
    assert_eq!(v["inputs_hash"].as_str().unwrap().len(), 64);
    let d = v["result"]["distance"].as_f64().unwrap();
    assert!((d - 4f64.ln()).abs() < 1e-15);
    assert_eq!(v["result"]["lambda_max"].as_f64().unwrap(), 2.0);
}

#[test]
fn metric_names_the_offending_element() {
    let dir = TempDir::new().unwrap();
    let inst = orthant_instance(&dir);
    let out = symcone(&["metric", "--instance", s(&inst), "--x", "x", "--y", "bad"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`bad`"));
}

#[test]
fn malformed_instances_exit_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = symcone(&["metric", "--instance", s(&path), "--x", "x", "--y", "y"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());

    let inst = orthant_instance(&dir);
    let out = symcone(&[
        "metric",
        "--instance",
        s(&inst),
        "--x",
        "x",
        "--y",
        "missing",
    ]);
    assert_eq!(code(&out), 2);

    let negative = write(
        &dir,
        "negative.json",
        &json!({
            "algebra": {"kind": "orthant", "param": 2},
            "maps": {"g": [{"type": "scalar", "payload": -2.0}]}
        }),
    );
    let out = symcone(&[
        "check",
        "--suite",
        "isometry",
        "--algebra",
        "orthant:2",
        "--instance",
        s(&negative),
        "--map",
        "g",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_orthant_quad() {
    let dir = TempDir::new().unwrap();
    let inst = orthant_instance(&dir);
    for extra in [&[][..], &["--initial", "start"][..]] {
        let mut args = vec!["solve", "--instance", s(&inst), "--map", "g", "--p", "2"];
        args.extend_from_slice(extra);
        let out = symcone(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let r = &stdout_json(&out)["result"];
        assert_eq!(r["converged"], true);
        let a: Vec<f64> = serde_json::from_value(r["solution"].clone()).unwrap();
        assert!(
            (a[0] - 4.0).abs() < 1e-12 && (a[1] - 9.0).abs() < 1e-12,
            "{a:?}"
        );
    }
}

#[test]
fn solve_negative_exponent_and_corollary() {
    let dir = TempDir::new().unwrap();
    let inst = orthant_instance(&dir);
    let out = symcone(&["solve", "--instance", s(&inst), "--map", "g", "--p", "-2"]);
    assert_eq!(code(&out), 0);
    let a: Vec<f64> =
        serde_json::from_value(stdout_json(&out)["result"]["solution"].clone()).unwrap();
    // d a = a^{-2}: a_i = d_i^{-1/3}
    assert!((a[0] - 4f64.powf(-1.0 / 3.0)).abs() < 1e-12);
    assert!((a[1] - 9f64.powf(-1.0 / 3.0)).abs() < 1e-12);

    let out = symcone(&[
        "solve",
        "--instance",
        s(&inst),
        "--map",
        "g",
        "--p",
        "2",
        "--corollary",
    ]);
    assert_eq!(code(&out), 0);
    let r = &stdout_json(&out)["result"];
    assert!(r["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn exponents_inside_the_unit_interval_exit_five() {
    let dir = TempDir::new().unwrap();
    let inst = orthant_instance(&dir);
    for p in ["0.5", "-1", "1"] {
        let out = symcone(&["solve", "--instance", s(&inst), "--map", "g", "--p", p]);
        assert_eq!(code(&out), 5, "p = {p}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("|p| > 1"));
    }
}

#[test]
fn iteration_cap_exits_four_with_a_report() {
    let dir = TempDir::new().unwrap();
    let inst = orthant_instance(&dir);
    let out = symcone(&[
        "solve",
        "--instance",
        s(&inst),
        "--map",
        "g",
        "--p",
        "1.5",
        "--max-iter",
        "1",
    ]);
    assert_eq!(code(&out), 4);
    let r = &stdout_json(&out)["result"];
    assert_eq!(r["converged"], false);
    assert_eq!(r["iterations"], 1);
}

#[test]
fn bushell_from_an_instance() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "bushell.json",
        &json!({
            "algebra": {"kind": "sym", "param": 3},
            "maps": {
                "t": [{"type": "congruence", "payload": [[1.2, 0.3, -0.4], [0.1, 0.9, 0.5], [-0.6, 0.2, 1.1]]}],
                "two": [{"type": "scalar", "payload": 2.0}, {"type": "scalar", "payload": 3.0}]
            }
        }),
    );
    let out = symcone(&["bushell", "--instance", s(&inst), "--map", "t"]);
    assert_eq!(code(&out), 0);
    let r = &stdout_json(&out)["result"];
    assert!(r["residual"].as_f64().unwrap() <= 1e-10);

    let out = symcone(&["bushell", "--instance", s(&inst), "--map", "two"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_passes_and_records_the_seed() {
    let out = symcone(&[
        "check",
        "--suite",
        "bounds",
        "--algebra",
        "spin:4",
        "--samples",
        "30",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn ill_conditioned_word_fails_the_isometry_suite() {
    // det 1e-5: the word is an automorphism, but rounding breaks the 1e-8 check
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "ill.json",
        &json!({
            "algebra": {"kind": "sym", "param": 2},
            "maps": {"g": [{"type": "congruence", "payload": [[1.0, 1.0], [1.0, 1.00001]]}]}
        }),
    );
    let out = symcone(&[
        "check",
        "--suite",
        "isometry",
        "--algebra",
        "sym:2",
        "--samples",
        "50",
        "--instance",
        s(&inst),
        "--map",
        "g",
    ]);
    assert_eq!(code(&out), 6);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["passed"], false);
    assert_eq!(v["result"]["counterexample"]["check"], "word isometry");
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    for alg in ["orthant:5", "sym:3", "spin:4"] {
        let a = symcone(&["gen", "--algebra", alg, "--what", "element", "--seed", "11"]);
        let b = symcone(&["gen", "--algebra", alg, "--what", "element", "--seed", "11"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
        let file = InstanceFile::from_json(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
        assert!(in_cone(&file.element("x").unwrap(), 1e-6).unwrap());

        let m = symcone(&[
            "gen",
            "--algebra",
            alg,
            "--what",
            "map",
            "--seed",
            "11",
            "--name",
            "h",
        ]);
        assert_eq!(code(&m), 0);
        let path = dir.path().join("map.json");
        std::fs::write(&path, &m.stdout).unwrap();
        let (file, _) = InstanceFile::load(&path).unwrap();
        let word = file.map("h").unwrap();
        assert!(isometry_check(&word, 50, 1).unwrap().is_isometry(1e-8));

        let out = symcone(&[
            "check",
            "--suite",
            "isometry",
            "--algebra",
            alg,
            "--samples",
            "40",
            "--instance",
            s(&path),
            "--map",
            "h",
        ]);
        assert_eq!(code(&out), 0);
    }
    let c = symcone(&[
        "gen",
        "--algebra",
        "sym:3",
        "--what",
        "element",
        "--seed",
        "12",
    ]);
    let a = symcone(&[
        "gen",
        "--algebra",
        "sym:3",
        "--what",
        "element",
        "--seed",
        "11",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn bad_algebra_strings_are_usage_errors() {
    let out = symcone(&["gen", "--algebra", "cube:3", "--what", "element"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn identical_points_are_at_distance_zero() {
    let dir = TempDir::new().unwrap();
    let inst = orthant_instance(&dir);
    let out = symcone(&["metric", "--instance", s(&inst), "--x", "x", "--y", "x"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out)["result"]["distance"].as_f64().unwrap(),
        0.0
    );
}

#[test]
fn identity_map_settles_immediately() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "identity.json",
        &json!({"algebra": {"kind": "spin", "param": 3}, "maps": {"id": []}}),
    );
    let out = symcone(&["solve", "--instance", s(&inst), "--map", "id", "--p", "2"]);
    assert_eq!(code(&out), 0);
    let r = &stdout_json(&out)["result"];
    let a: Vec<f64> = serde_json::from_value(r["solution"].clone()).unwrap();
    assert_eq!(a, vec![1.0, 0.0, 0.0]);
    assert!(r["iterations"].as_u64().unwrap() <= 2);
}

#[test]
fn reports_echo_arguments_and_rerun_identically() {
    let args = [
        "check",
        "--suite",
        "contraction",
        "--algebra",
        "orthant:4",
        "--samples",
        "1000",
        "--seed",
        "7",
    ];
    let a = symcone(&args);
    let b = symcone(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["args"], json!(args));
    for c in v["result"]["checks"].as_array().unwrap() {
        assert!(c["worst_slack"].as_f64().unwrap() >= 0.0, "{c}");
    }

    let out = symcone(&[
        "check",
        "--suite",
        "axioms",
        "--algebra",
        "sym:3",
        "--samples",
        "200",
    ]);
    assert_eq!(code(&out), 0);
}
