use std::process::{Command, Output};

use serde_json::Value;
use wreath_core::exactnum::{RationalFunction, RationalFunctionJson};
use wreath_core::freegrp::Word;
use wreath_core::groups::FiniteGroup;
use wreath_core::measure::{expect_stable, EngineCaps, StableFunction};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wreath")).args(args).output().expect("spawn wreath")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn expect_commutator_round_trips() {
    let v = json(&["expect", "-w", "abAB", "-G", "trivial", "-f", "Ind(phi0)", "--eval", "1,2,5"]);
    assert_eq!(v["display"], "[n] / [n + (-1)]");
    assert_eq!(v["validFrom"], 4);
    let wire: RationalFunctionJson = serde_json::from_value(v["value"].clone()).unwrap();
    let back = RationalFunction::from_json(&wire).unwrap();
    let g = FiniteGroup::trivial();
    let direct = expect_stable(&Word::parse_auto("abAB").unwrap(), &StableFunction::ind(0), &g, &EngineCaps::default()).unwrap();
    assert_eq!(back, direct.value);
    assert_eq!(serde_json::to_value(back.to_json()).unwrap(), v["value"]);
    let evals: Vec<&str> = v["eval"].as_array().unwrap().iter().map(|e| e["display"].as_str().unwrap()).collect();
    assert_eq!(evals, ["1", "2", "5/4"]);
}

#[test]
fn primitive_word_gives_zero() {
    let v = json(&["expect", "-w", "a", "-G", "cyclic2", "-f", "Ind(phi1)"]);
    assert_eq!(v["display"], "0");
}

#[test]
fn empty_word_and_bad_input() {
    assert_eq!(code(&["expect", "-w", ""]), 2);
    assert_eq!(code(&["expect", "-w", "ab", "-f", "Ind(phi"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn primitivity_ranks() {
    let v = json(&["pirank", "-w", "aabb"]);
    assert_eq!((v["pi"].as_u64(), v["crit_count"].as_u64()), (Some(2), Some(1)));
    assert_eq!(json(&["pirank", "-w", "ab"])["pi"], "inf");
    let out = run(&["pirank", "-w", "abab"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("proper power"));
    let v = json(&["crit", "-w", "abAB"]);
    assert_eq!(v["critical"].as_array().unwrap().len(), 1);
}

#[test]
fn inner_square_of_ind() {
    let v = json(&["inner", "-f", "Ind(phi0)*Ind(phi0)", "-g", "Ind(phi0)", "-G", "trivial"]);
    assert_eq!(v["display"], "5");
    let mut parts: Vec<String> = v["terms"][0]["contributions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["product"].as_str().unwrap().to_string())
        .collect();
    parts.sort();
    assert_eq!(parts, ["1", "1", "1", "2"]);
}

#[test]
fn quotients_of_ab() {
    let v = json(&["quotients", "-w", "ab", "-lam", "[1]"]);
    assert_eq!(v["count"], 2);
    let q = v["quotients"].as_array().unwrap();
    assert_eq!((q[0]["chi"].as_i64(), q[1]["chi"].as_i64()), (Some(0), Some(-1)));
    assert_eq!(q[0]["L"], "[n + (-1)] / [n]");
    assert_eq!(q[1]["L"], "[(1)] / [n]");
}

#[test]
fn verify_pass_and_perturbed_fail() {
    let args = ["verify", "-w", "aabb", "-G", "cyclic2", "-f", "Ind(phi1)", "--eval", "2,3"];
    let v = json(&args);
    assert_eq!(v["pass"], true);
    assert!(v["oracle"].as_array().unwrap().iter().all(|r| r["ok"] == true && r["method"] == "exact"));
    let out = run(&["verify", "-w", "aabb", "-G", "cyclic2", "-f", "Ind(phi1)", "--perturb-csub", "1/2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n^-1"));
    let v = json(&["verify", "-w", "abAB", "-G", "cyclic2", "-f", "7/3"]);
    assert_eq!(v["pass"], true);
}

#[test]
fn schreier_csv_is_deterministic() {
    let args = ["schreier", "--group", "cyclic2", "--action", "signed", "--n", "20", "--r", "4", "--trials", "3", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("action,G,n,r,k,trial,seed,X_size,connected,mu,alon_bound,thm_bound,pass"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn oracle_csv_exact_rows() {
    let out = run(&["oracle", "-w", "abAB", "-G", "cyclic2", "-f", "Ind(phi1)", "--n", "2,3", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("abAB,cyclic2,2,Ind(phi1),exact,0.5,"));
}

#[test]
fn basis_change() {
    let v = json(&["basis", "-f", "a[2,1]", "-G", "cyclic2"]);
    assert_eq!(v["degree"], 2);
    assert!(v["sInd"].as_str().unwrap().contains("sInd"));
}
