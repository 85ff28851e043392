use std::path::PathBuf;
use std::process::{Command, Output};

use nilmoduli_algebra::{Builtin, DIM};
use nilmoduli_automorphisms::random_automorphism;
use nilmoduli_moduli::{pullback_metric, realize, CanonicalForm};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilmoduli"))
        .args(args)
        .env_remove("NILMODULI_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    let text = if code >= 2 { out.stderr } else { out.stdout };
    (serde_json::from_slice(&text).expect("JSON report"), code)
}

fn temp_file(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn diag(d: [f64; 6]) -> String {
    let rows: Vec<Vec<f64>> = (0..DIM)
        .map(|i| (0..DIM).map(|j| if i == j { d[i] } else { 0.0 }).collect())
        .collect();
    serde_json::to_string(&rows).unwrap()
}

#[test]
fn describe_builtins() {
    let (v, code) = json(&["describe", "h9"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "nilmoduli/1");
    assert_eq!(v["outputs"]["nilpotency_step"], 3);
    assert_eq!(v["outputs"]["derivation_dim"], 15);
    assert_eq!(v["outputs"]["components"], 8);
    assert_eq!(v["residuals"]["jacobi"], 0);

    let (v, _) = json(&["describe", "h6"]);
    assert_eq!(v["outputs"]["derivation_dim"], 19);
    assert_eq!(v["outputs"]["salamon"], "(0,0,0,0,12,13)");
}

#[test]
fn describe_salamon_strings() {
    let (v, code) = json(&["describe", "(0,0,0,0,0,0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["abelian"], true);
    assert_eq!(v["outputs"]["nilpotency_step"], 1);
    assert_eq!(v["outputs"]["derivation_dim"], 36);
    assert!(v["outputs"]["components"].is_null());
}

#[test]
fn malformed_input_exits_2() {
    let (v, code) = json(&["describe", "(0,0,12"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("input"));
    let (_, code) = json(&["isometry", "--algebra", "h7", "--form", "{}"]);
    assert_eq!(code, 2);
    let (_, code) = json(&[
        "isometry",
        "--algebra",
        "h6",
        "--form",
        r#"{"r":1,"s":1,"E":1,"F":0,"G":1}"#,
    ]);
    assert_eq!(code, 2);
}

#[test]
fn canonicalize_diagonal_metrics() {
    let path = temp_file("identity.json", &diag([1.0; 6]));
    let (v, code) = json(&["canonicalize", "--algebra", "h6", "--input", &path]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["form"]["a"], 1);
    assert_eq!(v["outputs"]["form"]["b"], 1);

    let path = temp_file("diag.json", &diag([1.0, 1.0, 1.0, 1.0, 3.0, 2.0]));
    let (v, code) = json(&["canonicalize", "--algebra", "h6", "--input", &path]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["form"]["a"], 2);
    assert_eq!(v["outputs"]["form"]["b"], 3);
    assert!(v["residuals"]["witness_relative"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn non_spd_metric_exits_3() {
    let mut rows = vec![vec![0.0; 6]; 6];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    rows[0][1] = 2.0;
    rows[1][0] = 2.0;
    let path = temp_file("indefinite.json", &serde_json::to_string(&rows).unwrap());
    let (v, code) = json(&["canonicalize", "--algebra", "h6", "--input", &path]);
    assert_eq!(code, 3);
    assert_eq!(v["exit_code"], 3);
}

#[test]
fn canonicalize_recovers_pulled_back_forms() {
    let cases = [
        (
            Builtin::H5,
            CanonicalForm::H5 {
                r: 0.7,
                s: 0.3,
                e: 1.2,
                f: 0.4,
                g: 2.1,
            },
        ),
        (
            Builtin::H4,
            CanonicalForm::H4 {
                r: 0.6,
                a: 1.3,
                b: 0.2,
                c: 0.9,
            },
        ),
        (
            Builtin::H2,
            CanonicalForm::H2 {
                a: 0.2,
                b: 0.6,
                e: 0.8,
                f: -0.3,
                g: 1.7,
            },
        ),
        (
            Builtin::H9,
            CanonicalForm::H9 {
                a: 1.1,
                b: 0.7,
                c: 1.4,
                d: 0.3,
                e: 0.5,
                f: 0.2,
            },
        ),
    ];
    for (k, (alg, form)) in cases.into_iter().enumerate() {
        let g = realize(alg, &form).unwrap();
        let moved = pullback_metric(&g, &random_automorphism(alg, 40 + k as u64, None)).unwrap();
        let m = moved.matrix();
        let rows: Vec<Vec<f64>> = (0..DIM).map(|i| (0..DIM).map(|j| m[(i, j)]).collect()).collect();
        let path = temp_file(&format!("pullback_{alg}.json"), &serde_json::to_string(&rows).unwrap());
        let (v, code) = json(&["canonicalize", "--algebra", alg.name(), "--input", &path]);
        assert_eq!(code, 0, "{alg}");
        let back: CanonicalForm = serde_json::from_value(v["outputs"]["form"].clone()).unwrap();
        assert!(form.distance(&back).unwrap() <= 1e-7, "{alg}: {form:?} → {back:?}");
    }
}

#[test]
fn isometry_reports_verified_groups() {
    let (v, code) = json(&["isometry", "--algebra", "h6", "--form", r#"{"a":1,"b":1}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["descriptor"]["continuous_dim"], 1);
    assert_eq!(v["passed"], true);

    let (v, code) = json(&[
        "isometry",
        "--algebra",
        "h5",
        "--form",
        r#"{"r":1,"s":1,"E":1,"F":0,"G":1}"#,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["descriptor"]["continuous_dim"], 4);

    let form = temp_file("h4_form.json", r#"{"r":0.5,"a":1,"b":0.3,"c":2}"#);
    let (v, code) = json(&["isometry", "--algebra", "h4", "--form", &format!("@{form}")]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["descriptor"]["continuous_dim"], 0);
    assert_eq!(v["outputs"]["descriptor"]["finite_order"], 4);
}

#[test]
fn hermitian_closed_forms() {
    let (v, code) = json(&[
        "hermitian",
        "--algebra",
        "h5",
        "--form",
        r#"{"r":1,"s":1,"E":1,"F":0,"G":1}"#,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["closed_form"]["j2"]["kind"], "sphere");
    assert_eq!(v["outputs"]["closed_form"]["j1"]["kind"], "finite");

    let (v, code) = json(&["hermitian", "--algebra", "h4", "--form", r#"{"r":1,"a":1,"b":0,"c":2}"#]);
    assert_eq!(code, 0);
    let j2: Vec<(f64, f64, f64)> = v["outputs"]["closed_form"]["j2"]["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["a"].as_f64().unwrap(),
                s["b"].as_f64().unwrap(),
                s["c"].as_f64().unwrap(),
            )
        })
        .collect();
    assert_eq!(j2, vec![(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0)]);
}

#[test]
fn hermitian_search_on_h9() {
    let form = r#"{"A":1,"B":2,"C":1,"D":0,"E":0,"F":0}"#;
    let (v, code) = json(&["hermitian", "--algebra", "h9hat", "--form", form, "--search"]);
    assert_eq!(code, 0);
    let search = &v["outputs"]["search"];
    assert_eq!(search["verdict"], "no solution found within budget");
    assert_eq!(search["starts_run"], 64);
    assert!(search["best_residual"].as_f64().unwrap() > search["threshold"].as_f64().unwrap());

    let form = r#"{"A":1,"B":1,"C":1,"D":0,"E":0,"F":0}"#;
    let (v, code) = json(&[
        "hermitian",
        "--algebra",
        "h9hat",
        "--form",
        form,
        "--search",
        "--budget",
        "16",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["search"]["verdict"], "found");
    assert_eq!(v["outputs"]["search"]["J"].as_array().unwrap().len(), 36);
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let a = run(&["--no-timing", "tables"]);
    let b = run(&["--no-timing", "tables"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("wall_time_s").is_none());
    assert_eq!(v["passed"], true);
    assert_eq!(v["outputs"]["isotropy_h5"].as_array().unwrap().len(), 10);

    let timed: Value = serde_json::from_slice(&run(&["describe", "h2"]).stdout).unwrap();
    assert!(timed["wall_time_s"].as_f64().is_some());
}

#[test]
fn text_format_lists_paths() {
    let out = run(&["--format", "text", "--no-timing", "describe", "h4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "outputs.derivation_dim = 17"));
    assert!(text.lines().any(|l| l == "passed = true"));
}

#[test]
fn verify_moduli_suite() {
    let (v, code) = json(&["--no-timing", "verify", "--suite", "moduli", "--seed", "7"]);
    assert_eq!(code, 0);
    let by_check = v["outputs"]["moduli"]["by_check"].as_object().unwrap();
    assert_eq!(by_check.len(), 6);
    for tally in by_check.values() {
        assert_eq!(tally["passed"], 100);
        assert_eq!(tally["total"], 100);
    }
}

#[test]
fn verify_seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_nilmoduli"))
        .args(["--no-timing", "verify", "--suite", "algebra"])
        .env("NILMODULI_SEED", "7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"]["seed"], 7);
    let flag = run(&["--no-timing", "verify", "--suite", "algebra", "--seed", "7"]);
    assert_eq!(out.stdout, flag.stdout);
}

#[test]
fn verify_detects_sign_flip() {
    let (v, code) = json(&["--no-timing", "verify", "--suite", "all", "--mutate", "sign-flip"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert!(v["outputs"]["hermitian"]["failed"].as_u64().unwrap() > 0);
    assert!(v["outputs"]["hermitian"]["first_failure"]["minimized"].is_object());

    let (v, code) = json(&["--no-timing", "verify", "--suite", "all"]);
    assert_eq!(code, 0, "{v}");
}
