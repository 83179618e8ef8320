// Copyright 2026 The sqfree Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

use serde_json::Value;

fn sqf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqf")).args(args).env_remove("SQF_TRUNC_TOL").output().expect("spawn sqf")
}

fn json(args: &[&str]) -> Value {
    let out = sqf(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn exact_density() {
    let v = json(&["corr", "exact", "--lags", "0", "--tol", "1e-10"]);
    assert!((v["value"].as_f64().unwrap() - 0.6079271018).abs() < 1e-10);
    assert_eq!(v["method"], "mirsky");
    assert_eq!(v["lags"], serde_json::json!([0]));
}

#[test]
fn product_sign() {
    let v = json(&["spectral", "sign", "--phase1", "1/4", "--phase2", "1/9"]);
    assert_eq!(v["epsilon"], 1);
}

#[test]
fn levelset_figure_csv() {
    let out = sqf(&["corr", "levelset-figure", "--kmax", "1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,c2,d_class"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1000);
    let classes: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[2]).collect();
    for row in &rows {
        let same: Vec<&Vec<&str>> = rows.iter().filter(|r| r[2] == row[2]).collect();
        assert!(same.iter().all(|r| r[1] == row[1]), "class {} not level", row[2]);
    }
    assert!(classes.contains("1") && classes.contains("30"));
}

#[test]
fn exit_codes() {
    assert_eq!(sqf(&["corr", "exact", "--lags", "0", "--cutoff", "100", "--tol", "1e-10"]).status.code(), Some(2));
    assert_eq!(sqf(&["avg", "y2", "--phase", "1/2"]).status.code(), Some(1));
    assert_eq!(sqf(&["corr", "sigma", "--d", "4"]).status.code(), Some(1));
    assert_eq!(sqf(&["corr", "exact", "--lags", "0", "--nope"]).status.code(), Some(1));
    assert_eq!(sqf(&["--help"]).status.code(), Some(0));
    let err = String::from_utf8(sqf(&["avg", "progression", "--d", "2", "--t", "4"]).stderr).unwrap();
    assert!(err.contains("below d²"), "{err}");
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sqf"))
        .args(["corr", "exact", "--lags", "0", "--cutoff", "100"])
        .env("SQF_TRUNC_TOL", "1e-10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_independent_of_threads() {
    let args = ["corr", "empirical", "--lags", "0,1,3", "--limit", "3000000"];
    let one = sqf(&[&["--threads", "1"][..], &args[..]].concat()).stdout;
    let four = sqf(&[&["--threads", "4"][..], &args[..]].concat()).stdout;
    assert_eq!(one, four);
    let a = sqf(&["--threads", "1", "avg", "y3", "--phase1", "1/4", "--phase2", "5/36"]).stdout;
    let b = sqf(&["--threads", "3", "avg", "y3", "--phase1", "1/4", "--phase2", "5/36"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn out_file_and_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atoms.json");
    let out = sqf(&["spectral", "atoms", "--dmax", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let atoms: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mass: f64 = atoms.iter().map(|a| a["weight"].as_f64().unwrap()).sum();
    assert!(atoms.iter().all(|a| a.get("l").is_some() && a.get("dsq").is_some()));
    assert!(mass > 0.0 && mass < 0.6079271019);
}

#[test]
fn sieve_outputs() {
    let csv = String::from_utf8(sqf(&["sieve", "--start", "1", "--length", "4"]).stdout).unwrap();
    assert_eq!(csv, "n,mu,mu2\n1,1,1\n2,-1,1\n3,-1,1\n4,0,0\n");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("block.bin");
    assert!(sqf(&["sieve", "--length", "1000", "--bytes", "--out", path.to_str().unwrap()]).status.success());
    let block = sqfree::SieveBlock::from_bytes(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(block.count_ones(), 608);
}

#[test]
fn density_and_groups() {
    let v = json(&["density", "--exclude", "2,3", "--limit", "100000", "--check-bound"]);
    assert_eq!(v["bound_holds"], true);
    assert_eq!(v["constant_exact"], "13/3");
    let v = json(&["density", "convolve-check", "--exclude", "2", "--limit", "2000"]);
    assert_eq!(v["convolution"], true);
    let v = json(&["density", "series", "--p", "2", "--limit", "1000"]);
    assert!(v["tail_bound"].as_f64().unwrap() > 0.0);
    let v = json(&["group", "verify", "--phase", "6/900", "--steps", "500"]);
    assert_eq!(v["exact"], true);
    let v = json(&["group", "match", "--dmax", "10"]);
    assert_eq!(v["equal"], true);
    let orbit = String::from_utf8(sqf(&["group", "orbit", "--primes", "2", "--steps", "2"]).stdout).unwrap();
    assert_eq!(orbit, "step,mod_4,mod_9\n0,0,0\n1,1,1\n2,2,2\n");
}

#[test]
fn verify_quick() {
    let v = json(&["verify", "--profile", "quick"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 3);
}
