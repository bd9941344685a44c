use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_leafwise"))
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    let value = serde_json::from_str(&stdout).expect("report is JSON");
    (value, out.status.code().expect("exit code"), stdout)
}

fn run_file(args: &[&str], file: &str) -> (Value, i32) {
    let path = data(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    let (v, code, _) = run(&all);
    (v, code)
}

fn temp_file(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("leafwise-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn affine_index_on_the_quadratic_plane_example_matches() {
    let (v, code) = run_file(&["index", "affine"], "p2_quadratic.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lhs"], "1");
    assert_eq!(v["result"]["rhs"], "1");
    assert_eq!(v["result"]["verdict"], "match");
    assert_eq!(v["result"]["contributions"].as_array().unwrap().len(), 7);
    assert_eq!(v["result"]["convention"], "integral of h^n over P^n is 1");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn projective_index_with_default_and_explicit_phi() {
    let (v, code) = run_file(&["index", "projective"], "p2_quadratic.json");
    assert_eq!(code, 0);
    assert_eq!(v["options"]["phi"], "x1^3 + x2^3 + x3^3");
    assert_eq!(v["result"]["lhs"], "1");
    let (v, code) = run_file(
        &["index", "projective", "--phi", "x1*x2*x3"],
        "p2_quadratic.json",
    );
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["lhs"], v["result"]["rhs"]);
}

#[test]
fn baum_bott_counts_points_of_degree_one_and_two_fields() {
    let (v, code) = run_file(&["index", "baumbott"], "p2_quadratic.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lhs"], "7");
    let (v, code) = run_file(&["index", "baumbott"], "p2_linear.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lhs"], "3");
}

#[test]
fn vanishing_symbols_are_inadmissible() {
    let (v, code) = run_file(&["index", "affine"], "p2_linear.json");
    assert_eq!(code, 3);
    assert_eq!(v["result"]["verdict"], "not-applicable");
    assert_eq!(v["result"]["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn wrong_chern_data_is_a_mismatch() {
    let text = std::fs::read_to_string(data("p2_quadratic.json"))
        .unwrap()
        .replace("\"-h\"", "\"-2*h\"");
    let p = temp_file("mismatch.json", &text);
    let (v, code, _) = run(&["index", "affine", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["rhs"], "4");
    assert_eq!(v["result"]["verdict"], "mismatch");
}

#[test]
fn reports_are_byte_identical_across_runs_and_job_counts() {
    let p = data("p2_quadratic.json");
    let p = p.to_str().unwrap();
    let (a, _, sa) = run(&["index", "projective", p]);
    let (_, _, sb) = run(&["index", "projective", p]);
    assert_eq!(sa, sb);
    let (c, _, _) = run(&["--jobs", "4", "index", "projective", p]);
    assert_eq!(a["result"], c["result"]);
}

#[test]
fn malformed_json_reports_the_schema_path() {
    let p = temp_file(
        "bad.json",
        r#"{"manifold": {"kind": "projective_space", "n": 2}, "c1_tf": "-h",
            "charts": [{"name": "a", "vars": ["x"], "components": 5}]}"#,
    );
    let (v, code, _) = run(&["index", "affine", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "input");
    assert_eq!(v["error"]["path"], "$.charts[0].components");
}

#[test]
fn expression_errors_report_their_location() {
    let p = temp_file(
        "bad_expr.json",
        r#"{"vars": ["z"], "order": 6, "expr": "z + "}"#,
    );
    let (v, code, _) = run(&["schwarzian", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["path"], "$.expr");
    assert!(v["error"]["message"].as_str().unwrap().contains('4'));
    let (v, code, _) = run(&["index", "projective", "--phi", "x1^3 + y", data("p2_quadratic.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["path"], "--phi");
}

#[test]
fn schwarzian_of_a_mobius_series_vanishes() {
    let (v, code) = run_file(&["schwarzian"], "mobius.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["coeffs"], serde_json::json!({}));
    assert!(v["result"]["order"].as_i64().unwrap() >= 9);
}

#[test]
fn distortion_of_a_cubic() {
    let (v, code) = run_file(&["distortion"], "cubic.json");
    assert_eq!(code, 0);
    // f' = 1 + z + z², f'' = 1 + 2z, f''/f' = 1 + z − 2z² + …
    assert_eq!(v["result"]["coeffs"]["0"], "1");
    assert_eq!(v["result"]["coeffs"]["1"], "1");
    assert_eq!(v["result"]["coeffs"]["2"], "-2");
}

#[test]
fn angles_of_bundled_forms() {
    let (v, code) = run_file(&["angle"], "fuchsian_one_form.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["theta"], "1/2");
    assert_eq!(v["result"]["ramification"], "2");
    let (v, code) = run_file(&["angle"], "quadratic_differential.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["theta_squared"], "1/4");
    assert_eq!(v["result"]["class"], "power");
}

#[test]
fn riccati_needs_an_explicit_branch() {
    let (v, code) = run_file(&["riccati"], "quadratic_differential.json");
    assert_eq!(code, 2);
    assert_eq!(v["error"]["path"], "--branch");
    let (v, code) = run_file(&["riccati", "--branch", "1/2"], "quadratic_differential.json");
    assert_eq!(code, 0);
    assert_eq!(v["options"]["branch"], "1/2");
    assert_eq!(v["result"]["affine_symbol"]["coeffs"]["-1"], "-1/2");
}

#[test]
fn normal_forms() {
    let (v, code) = run_file(&["normalform", "affine"], "normalform_affine.json");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["normal_symbol"], "2");
    assert_eq!(v["result"]["normalizing_factor"]["coeffs"]["0,0"], "1");
    let (_, code) = run_file(&["normalform", "projective"], "normalform_projective.json");
    assert_eq!(code, 2);
    let (v, code) = run_file(
        &["normalform", "projective", "--branch", "1"],
        "normalform_projective.json",
    );
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "inadmissible");
    let (v, code) = run_file(
        &["normalform", "projective", "--branch", "-1"],
        "normalform_projective.json",
    );
    assert_eq!(code, 0);
    assert_eq!(v["result"]["affine_symbol"]["coeffs"]["1"], "1/2");
}

#[test]
fn brjuno_marks_floating_fields() {
    let (v, code, _) = run(&["brjuno", "--lambda", "1,1", "--mu", "-1/2", "--max", "16"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "inconclusive by construction");
    assert_eq!(v["result"]["floating"][0], "partial_sums");
    assert_eq!(v["result"]["resonant"], false);
    let (_, code, _) = run(&["brjuno", "--lambda", "1,1", "--mu", "-1/2", "--max", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn geodesic_checks_pass_on_bundled_structures() {
    for file in ["p2_quadratic.json", "projective_chart.json"] {
        let (v, code) = run_file(&["geodesic", "check"], file);
        assert_eq!(code, 0, "{file}: {v}");
        assert_eq!(v["verdict"], "pass");
        assert!(!v["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn geodesic_check_flags_a_perturbed_symbol() {
    let text = std::fs::read_to_string(data("projective_chart.json"))
        .unwrap()
        .replace(r#""v": "0""#, r#""v": "v""#);
    let p = temp_file("perturbed.json", &text);
    let (v, code, _) = run(&["geodesic", "check", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn product_surface_and_signature() {
    let (v, code, _) = run(&["product-surface", "--genus", "2", "--nv", "1", "--nh", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["c1_k_f2_k_s_dual"]["h"], "4");
    assert_eq!(v["result"]["c1_k_f2_k_s_dual"]["v"], "4");
    let (v, code, _) = run(&["signature", "--c1sq", "9", "--c2", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["projective_structure_possible"], false);
}

#[test]
fn expand_produces_an_equivalent_chart_description() {
    let (v, code) = run_file(&["expand"], "p2_quadratic.json");
    assert_eq!(code, 0);
    let expanded = serde_json::to_string(&v["result"]).unwrap();
    let p = temp_file("expanded.json", &expanded);
    let (a, code, _) = run(&["index", "affine", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (b, _) = run_file(&["index", "affine"], "p2_quadratic.json");
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn text_rendering_carries_the_verdict() {
    let out = Command::new(env!("CARGO_BIN_EXE_leafwise"))
        .args(["index", "affine", data("p2_quadratic.json").to_str().unwrap()])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: match"));
    assert!(text.contains("schema_version: 1"));
}

#[test]
fn every_bundled_example_runs() {
    let cases: &[(&[&str], &str)] = &[
        (&["index", "affine"], "p2_quadratic.json"),
        (&["index", "baumbott"], "p2_linear.json"),
        (&["schwarzian"], "mobius.json"),
        (&["distortion"], "cubic.json"),
        (&["angle"], "fuchsian_one_form.json"),
        (&["angle"], "quadratic_differential.json"),
        (&["normalform", "affine"], "normalform_affine.json"),
        (&["normalform", "projective", "--branch", "-1"], "normalform_projective.json"),
        (&["geodesic", "check"], "projective_chart.json"),
    ];
    let listed: Vec<&str> = cases.iter().map(|(_, f)| *f).collect();
    for entry in std::fs::read_dir(data("")).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        assert!(listed.contains(&name.as_str()), "{name} is not exercised");
    }
    for (args, file) in cases {
        let (_, code) = run_file(args, file);
        assert_eq!(code, 0, "{args:?} {file}");
    }
}
