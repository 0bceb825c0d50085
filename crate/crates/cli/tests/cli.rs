use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kron(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kron"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("KRON_CACHE_DIR", dir),
        None => cmd.env("KRON_CACHE_DIR", ""),
    };
    cmd.output().expect("binary runs")
}

fn json(args: &[&str], cache: Option<&Path>) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = kron(&full, cache);
    let stdout = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(stdout.trim()).unwrap_or(Value::Null))
}

#[test]
fn coeff_first_entry_of_example_a() {
    let (code, v) = json(&["coeff", "--d", "3", "--k", "4", "--tuple", "4,2;2,2,2;3,2,1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], "1");
    assert_eq!(v["command"], "coeff");
}

#[test]
fn coeff_with_both_backends() {
    let (code, v) = json(&["coeff", "--d", "3", "--k", "2", "--tuple", "2,2;2,1,1;2,2", "--backend", "both"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["backend"], "both");
    assert_eq!(v["results"]["value"], "0");
}

#[test]
fn sl2_check_d3() {
    let (code, v) = json(&["sl2-check", "--d", "3"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["holds"], true);
    assert_eq!(v["results"]["checked"], 256);
}

#[test]
fn at_of_the_binary_cube_has_no_negative_hypercubes() {
    let (code, v) = json(&["at", "--d", "3", "--k", "2"], None);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["negative"], "0");
    assert_eq!(r["positive"], r["at"]);
    assert_eq!(r["at"], "24");
    let (_, t) = json(&["at", "--d", "3", "--k", "2", "--type", "{(1,1,1),(2,2,2)}"], None);
    assert_eq!(t["results"]["at"], "1");
}

#[test]
fn sequence_report_fields() {
    let (code, v) = json(&["sequence", "--d", "3", "--k", "3", "--tuple", "3,2;2,2,1;3,1,1"], None);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["values"], serde_json::json!(["1", "4", "7", "7", "5", "3", "1"]));
    assert_eq!(r["range"], serde_json::json!([0, 6]));
    assert_eq!(r["unimodal"], true);
    assert_eq!(r["symmetric"], false);
    assert!(r["logconcave"].is_array());
}

#[test]
fn omega_power_and_magic_count() {
    let (_, v) = json(&["omega-power", "--d", "3", "--k", "3", "--n", "2"], None);
    assert_eq!(v["results"]["zero"], true);
    let (_, v) = json(&["omega-power", "--d", "3", "--k", "2", "--n", "4"], None);
    assert_eq!(v["results"]["listed"][0]["coefficient"].as_str().unwrap().trim_start_matches('-'), "24");
    let (_, v) = json(&["magic-count", "--d", "3", "--k", "2"], None);
    assert_eq!(v["results"]["counts"], serde_json::json!(["1", "4", "8", "4", "1"]));
}

#[test]
fn lefschetz_subcommands() {
    let (code, v) = json(&["lefschetz", "lp", "--d", "3", "--k", "2", "--tuple", "1;1;1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["holds"], true);
    let (_, v) = json(&["lefschetz", "hlp", "--d", "3", "--k", "2", "--tuple", "2;1,1;1,1"], None);
    assert_eq!(v["results"]["holds"], true);
    let (_, v) = json(&["lefschetz", "lp-full", "--d", "3", "--k", "3"], None);
    assert_eq!(v["results"]["holds"], false);
    assert_eq!(v["results"]["evidence"]["witness"], "omega");
}

#[test]
fn hodge_check() {
    let (code, v) = json(&["hodge-check", "--d", "3", "--k", "2", "--tuple", "2,1;2,1;2,1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["holds"], true);
    assert_eq!(v["results"]["g"], v["results"]["g_complement"]);
}

#[test]
fn exit_codes() {
    assert_eq!(kron(&["coeff", "--d", "3", "--k", "4", "--tuple", "2,3;1;1"], None).status.code(), Some(2));
    assert_eq!(kron(&["coeff", "--d", "3", "--k", "4", "--tuple", "1;1"], None).status.code(), Some(2));
    assert_eq!(kron(&["coeff", "--d", "3"], None).status.code(), Some(2));
    assert_eq!(kron(&["nonsense"], None).status.code(), Some(2));
    assert_eq!(kron(&["at", "--d", "3", "--k", "3", "--budget", "4"], None).status.code(), Some(1));
    let hwv_budget = ["coeff", "--d", "3", "--k", "4", "--tuple", "4,2;2,2,2;3,2,1", "--backend", "hwv", "--budget", "5"];
    assert_eq!(kron(&hwv_budget, None).status.code(), Some(1));
}

#[test]
fn disabled_cache_only_misses() {
    let args = ["sequence", "--d", "3", "--k", "2", "--tuple", "1;1;1"];
    let (_, first) = json(&args, None);
    let (_, second) = json(&args, None);
    for v in [first, second] {
        assert_eq!(v["cache"]["hits"], 0);
        assert_eq!(v["cache"]["misses"], 4);
    }
}

#[test]
fn second_run_hits_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sequence", "--d", "3", "--k", "4", "--tuple", "2,1;2,1;2,1", "--len", "6"];
    let (_, first) = json(&args, Some(dir.path()));
    let (_, second) = json(&args, Some(dir.path()));
    assert_eq!(first["cache"]["hits"], 0);
    assert_eq!(second["cache"]["hits"], 6);
    assert_eq!(second["cache"]["misses"], 0);
    assert_eq!(first["results"]["values"], second["results"]["values"]);
}

#[test]
fn verify_paper_second_run_is_cached() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify-paper", "--only", "2,3,4"];
    let (code, _) = json(&args, Some(dir.path()));
    assert_eq!(code, 0);
    let (code, v) = json(&args, Some(dir.path()));
    assert_eq!(code, 0);
    let hits = v["cache"]["hits"].as_f64().unwrap();
    let misses = v["cache"]["misses"].as_f64().unwrap();
    assert!(hits / (hits + misses) >= 0.9, "{v}");
    assert_eq!(v["results"]["all_passed"], true);
}

#[test]
fn corrupted_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("coefficients.jsonl"), "garbage\n").unwrap();
    let out = kron(&["coeff", "--d", "3", "--k", "2", "--tuple", "1;1;1", "--backend", "characters"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupted"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("g(1;1;1) = 1"));
}

#[test]
fn jobs_flag_does_not_change_results() {
    let args = |jobs: &'static str| ["--jobs", jobs, "sequence", "--d", "3", "--k", "4", "--tuple", "1;1;1", "--len", "8"];
    let (_, one) = json(&args("1"), None);
    let (_, two) = json(&args("2"), None);
    assert_eq!(one["results"], two["results"]);
}
