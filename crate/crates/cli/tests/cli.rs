use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_scatlab")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

const QUAD: &str = "x^q - x^q^2 + x^q^4 + x^q^5";

#[test]
fn scattered_report_round_trips() {
    let (code, v, err) = run(&["scattered", "--field", "q=5,n=6", "--f", QUAD, "--spectrum"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["result"]["verdict"], "scattered");
    assert_eq!(v["spectrum"]["size"], 3906);
    assert!(err.contains("scattered"));
    // Feed the emitted descriptor and coefficient array back in.
    let field = v["field"]["descriptor"].to_string();
    let f = v["f"].to_string();
    let (code2, v2, _) = run(&["scattered", "--json", "--field", &field, "--f", &f]);
    assert_eq!(code2, 0);
    assert_eq!(v2["f"], v["f"]);
    assert_eq!(v2["field"], v["field"]);
}

#[test]
fn not_scattered_has_witness() {
    let (code, v, _) = run(&["scattered", "--json", "--field", "p=3,n=4", "--f", "x^q + x^q^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "not_scattered");
    assert!(v["result"]["weight"].as_u64().unwrap() >= 2);
}

#[test]
fn input_errors_exit_two() {
    let (code, v, err) = run(&["scattered", "--json", "--field", "q=5,n=6", "--f", "[15625,0,0,0,0,0]"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["at"], "polynomial[0]");
    assert!(err.contains("out of range"));
    let (code, v, _) = run(&["scattered", "--field", "q=6,n=2", "--f", "x"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["at"], "q");
    let (code, _, _) = run(&["scattered", "--field", "q=5,n=6"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["equiv", "--field", "q=5,n=6", "--f", "x^q +", "--h", "x^q"]);
    assert_eq!(code, 2);
}

#[test]
fn vertex_projects_to_quadrinomial() {
    let (code, v, _) = run(&["geometry", "vertex", "--json", "--field", "q=5,n=6", "--kind", "quadrinomial"]);
    assert_eq!(code, 0);
    let gamma = serde_json::json!({"basis": v["gamma"]["basis"]}).to_string();
    let lambda = serde_json::json!({"equations": v["lambda"]["equations"]}).to_string();
    let (code, p, _) = run(&["geometry", "project", "--json", "--field", "q=5,n=6", "--gamma", &gamma, "--lambda", &lambda]);
    assert_eq!(code, 0);
    assert_eq!(p["f"], serde_json::json!([0, 1, 4, 0, 1, 1]));
    assert_eq!(p["points"].as_array().unwrap().len(), 3906);
    let (_, i, _) = run(&["geometry", "intn", "--json", "--field", "q=5,n=6", "--gamma", &gamma, "--s", "5"]);
    assert_eq!(i["intn"], 3);
    let (_, c, _) = run(&["geometry", "criteria", "--json", "--field", "q=5,n=6", "--gamma", &gamma]);
    assert_eq!(c["pseudoregulus"]["holds"], false);
    assert_eq!(c["lp"]["verdict"], "not_applicable");
}

#[test]
fn lp_vertex_criteria() {
    let (_, v, _) = run(&["geometry", "vertex", "--json", "--field", "p=3,n=5", "--kind", "lp", "--s", "2", "--delta", "7"]);
    let gamma = serde_json::json!({"basis": v["gamma"]["basis"]}).to_string();
    let (code, c, _) = run(&["geometry", "criteria", "--json", "--field", "p=3,n=5", "--gamma", &gamma, "--s", "2"]);
    assert_eq!(code, 0);
    assert_eq!(c["lp"]["verdict"], "lp");
    assert_eq!(c["lp"]["delta"], 7);
    assert!(c["harmonic"]["empty"].is_boolean());
}

#[test]
fn code_commands() {
    let gens = format!(r#"["x", "{QUAD}"]"#);
    let (code, v, _) = run(&["mrd", "audit", "--json", "--field", "q=5,n=6", "--gens", &gens, "--left-linear"]);
    assert_eq!(code, 0);
    assert_eq!(v["mrd"]["is_mrd"], true);
    assert_eq!(v["mrd"]["min_distance"], 5);
    assert_eq!(v["left_idealiser"]["field_degree"], 6);
    let g = r#"["x", "x^q"]"#;
    let (_, d, _) = run(&["dual", "--json", "--field", "p=3,n=4", "--gens", g, "--left-linear"]);
    assert_eq!(d["dual"]["dim_fq"], 8);
    let (_, r, _) = run(&["recognize", "--json", "--field", "p=3,n=4", "--gens", g, "--left-linear"]);
    // <x, x^q> twisted by 3 is <x^{q^3}, x>, so both s = 1 and s = 3 match.
    assert_eq!(r["recognizers"]["gabidulin_s"], serde_json::json!([1, 3]));
    assert!(r["recognizers"]["twisted"]["not_applicable"].is_string());
    let (_, i, _) = run(&["idealiser", "--json", "--field", "p=3,n=4", "--gens", g, "--left-linear"]);
    assert_eq!(i["left"]["field_degree"], 4);
}

#[test]
fn equivalence_command() {
    let (code, v, _) = run(&["equiv", "--json", "--pgl", "--field", "q=5,n=6", "--f", QUAD, "--h", "x^q + x^q^3 + 2x^q^5"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["status"], "equivalent");
    let (_, w, _) = run(&["equiv", "--json", "--strategy", "sweep-b", "--field", "p=3,n=4", "--f", "x^q", "--h", "[0,0,0,1]"]);
    assert_eq!(w["verdict"]["status"], "equivalent");
}

fn strip_runtime(mut v: Value) -> Value {
    for e in v["entries"].as_array_mut().unwrap() {
        e.as_object_mut().unwrap().remove("runtime_ms");
    }
    v
}

#[test]
fn reproduction_is_deterministic() {
    let args = ["reproduce", "--json", "--suite", "mrd", "--qmax", "5", "--threads", "1"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a["schema_version"], 1);
    assert_eq!(a["pass"], true);
    assert_eq!(strip_runtime(a), strip_runtime(b));
}

#[test]
fn budget_failures_exit_one() {
    let (code, v, err) = run(&["reproduce", "--suite", "scattered", "--qmax", "5", "--budget", "10"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert_eq!(v["entries"][0]["verdict"], "budget_exceeded");
    assert!(err.contains("FAILED"));
    let (code, v, _) = run(&["reproduce", "--json", "--suite", "scattered", "--qmax", "5", "--budget", "10", "--force"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
}
