use std::path::Path;

use higgs_threeterm::cli::{run, WORKERS_ENV};
use jsonschema::JSONSchema;
use serde_json::{json, Value};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("higgs-threeterm").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json_of(o: &Output) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn assert_schema(name: &str, v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).unwrap();
    if let Err(errors) = compiled.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} schema rejected output: {msgs:?}\n{v:#}");
    };
}

#[test]
fn check_stable_chain() {
    let o = cli(&["check", "--roots", "4,2,0,4,2,0,-2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_of(&o);
    assert_schema("check", &v);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["stable"], true);
    assert_eq!(v["stability"]["verdict"]["kind"], "stable");
    assert_eq!(v["three_term"]["holds"], true);
    assert_eq!(v["multiplicities"], json!({"-2": 1, "0": 2, "2": 2, "4": 2}));
    assert_eq!(v["hitchin_invariants"].as_array().unwrap().len(), 7);
}

#[test]
fn check_unstable_chain_is_informational() {
    let o = cli(&["check", "--roots", "0,4"]);
    assert_eq!(o.code, 0);
    let v = json_of(&o);
    assert_schema("check", &v);
    assert_eq!(v["stable"], false);
    assert_eq!(v["three_term"]["holds"], false);
    let heights: Vec<i64> =
        v["three_term"]["violations"].as_array().unwrap().iter().map(|x| x["height"].as_i64().unwrap()).collect();
    assert_eq!(heights, vec![0, 4]);
}

#[test]
fn check_inadmissible_chain_is_reported() {
    let o = cli(&["check", "--roots", "0,2,2"]);
    assert_eq!(o.code, 0);
    let v = json_of(&o);
    assert_schema("check", &v);
    assert_eq!(v["admissible"], false);
    assert_eq!(v["admissibility"]["violations"], json!([{"step": 2, "weight": 2}]));
    assert!(v.get("hitchin_invariants").is_none());
}

#[test]
fn check_csv() {
    let o = cli(&["--format", "csv", "check", "--roots", "4,2,0,4,2,0,-2"]);
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "roots,admissible,total_slope,verdict,three_term_holds");
    assert_eq!(lines[1], "\"4,2,0,4,2,0,-2\",true,10/7,stable,true");
}

#[test]
fn translate_table_rows() {
    let o = cli(&["translate", "--beta", "0", "--u", "1/6", "--v", "0"]);
    assert_eq!(o.code, 0);
    let v = json_of(&o);
    assert_schema("translate", &v);
    assert_eq!(v["connection"], json!({"jump": "1/6", "eig": {"re": "-1/6", "im": "0"}}));
    assert_eq!(v["higgs"], json!({"jump": "-1/6", "eig": {"re": "0", "im": "0"}}));
}

#[test]
fn translate_rejects_u_outside_window() {
    let o = cli(&["translate", "--beta", "0", "--u", "1", "--v", "0"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("error"));
}

#[test]
fn rank1_report() {
    let o = cli(&["rank1", "--a", "1", "--b", "0"]);
    assert_eq!(o.code, 0);
    let v = json_of(&o);
    assert_schema("rank1", &v);
    assert_eq!(v["jump"], "5/6");
    assert_eq!(v["unfiltered_degree"], "-5/6");
    assert_eq!(v["filtered_degree"], "0");
    assert_eq!(v["residue_angle"], "1/6");
}

#[test]
fn filtered_degree_both_sides() {
    let o = cli(&["filtered-degree", "--side", "rep", "--jumps", "1/6:1", "--jumps", "1/2:2,1/3:1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_of(&o);
    assert_schema("filtered-degree", &v);
    // 1/6 + 2/2 + 1/3
    assert_eq!(v["degree"], "3/2");

    let o = cli(&["filtered-degree", "--side", "bundle", "--jumps", "1/2:2", "--base-degree", "-1", "--rank", "2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_of(&o);
    assert_schema("filtered-degree", &v);
    assert_eq!(v["degree"], "0");
    assert_eq!(v["slope"], "0");

    assert_eq!(cli(&["filtered-degree", "--side", "bundle", "--jumps", "1/2:2"]).code, 2);
    assert_eq!(cli(&["filtered-degree", "--side", "bundle", "--jumps", "3/2:1", "--rank", "1"]).code, 2);
}

#[test]
fn pair_all_heights_and_single_height() {
    let o = cli(&["pair", "--roots", "4,2,0,4,2,0,-2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_of(&o);
    assert_schema("pair", &v);
    assert_eq!(v["verified"], true);
    let counts: Vec<usize> =
        v["certificates"].as_array().unwrap().iter().map(|c| c["pairs"].as_array().unwrap().len()).collect();
    assert_eq!(counts, vec![1, 2, 2, 2]);

    let o = cli(&["pair", "--roots", "4,2,0,4,2,0,-2", "--height", "0"]);
    assert_eq!(o.code, 0);
    let v = json_of(&o);
    assert_schema("certificate", &v);
    assert_eq!(v["height"], 0);

    let o = cli(&["--format", "csv", "pair", "--roots", "4,2,0,4,2,0,-2", "--height", "2"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().next(), Some("height,source,target,label"));
    assert_eq!(o.stdout.lines().count(), 3);
}

#[test]
fn pair_refuses_unstable_input() {
    let o = cli(&["pair", "--roots", "0,4"]);
    assert_eq!(o.code, 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn enumerate_sweep_passes() {
    let o = cli(&["enumerate", "--n-min", "2", "--n-max", "4", "--max-rise", "6", "--root-bound", "8"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_of(&o);
    assert_schema("sweep-report", &v);
    assert_eq!(v["pass"], true);
    assert_eq!(v["violations"], json!([]));
}

#[test]
fn enumerate_list_and_csv() {
    let o = cli(&["enumerate", "--list", "--n-min", "2", "--n-max", "2", "--max-rise", "4", "--root-bound", "4"]);
    assert_eq!(o.code, 0);
    assert_eq!(json_of(&o), json!([[0, -2]]));

    let o = cli(&[
        "enumerate", "--list", "--include-unstable", "--n-min", "2", "--n-max", "2", "--max-rise", "4", "--root-bound", "4",
    ]);
    assert_eq!(json_of(&o), json!([[0, -2], [0, 2], [0, 4]]));

    let o = cli(&["--format", "csv", "enumerate", "--n-min", "2", "--n-max", "3", "--max-rise", "4", "--root-bound", "4"]);
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert!(lines[0].starts_with("n,generated,admissible,stable"));
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,4,3,1,"));
}

#[test]
fn enumerate_rejects_bad_parameters() {
    assert_eq!(cli(&["enumerate", "--n-min", "1"]).code, 2);
    assert_eq!(cli(&["enumerate", "--max-rise", "5"]).code, 2);
    assert_eq!(cli(&["enumerate", "--n-min", "5", "--n-max", "3"]).code, 2);
}

#[test]
fn workers_from_environment() {
    // only this test touches the variable
    std::env::set_var(WORKERS_ENV, "4");
    let args = ["enumerate", "--n-min", "2", "--n-max", "4", "--max-rise", "6", "--root-bound", "8"];
    let from_env = json_of(&cli(&args));
    std::env::remove_var(WORKERS_ENV);
    let explicit = json_of(&cli(&[&args[..], &["--workers", "1"]].concat()));
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_seconds");
        v
    };
    assert_eq!(strip(from_env), strip(explicit));
}

#[test]
fn verify_metric_passes_and_fails() {
    let o = cli(&["verify-metric", "--grid", "20", "--seed", "3"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let v = json_of(&o);
    assert_schema("verify-metric", &v);
    assert!(v.as_array().unwrap().iter().all(|c| c["pass"] == true));

    let o = cli(&["verify-metric", "--tau", "0.3+1.2i", "--tau", "i", "--tolerance", "1e-30"]);
    assert_eq!(o.code, 1);
    assert_schema("verify-metric", &json_of(&o));

    assert_eq!(cli(&["verify-metric", "--tau", "0.5-1i"]).code, 2);
    assert_eq!(cli(&["verify-metric", "--h", "0.5"]).code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["check"]).code, 2);
    assert_eq!(cli(&["check", "--roots", "0,3"]).code, 2);
    assert_eq!(cli(&["check", "--roots", ""]).code, 2);
    assert_eq!(cli(&["--format", "xml", "check", "--roots", "0"]).code, 2);
}

#[test]
fn help_and_version_exit_zero() {
    let o = cli(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("verify-metric"));
    assert_eq!(cli(&["--version"]).code, 0);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = cli(&["--out", path.to_str().unwrap(), "rank1", "--a", "3", "--b", "1/2"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema("rank1", &v);
    assert_eq!(v["filtered_degree"], "1/2");
    assert_eq!(v["jump"], "0");
}
