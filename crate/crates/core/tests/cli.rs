use std::process::{Command, Output};

use serde_json::Value;

fn kf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kf")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = kf(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn field_arithmetic() {
    let v = json(&["field", "--p", "2", "--k", "4", "--op", "mul", "--a", "01", "--b", "11"]);
    assert_eq!(v["result"], "0110");
    let v = json(&["field", "--k", "2", "--op", "inv", "--a", "01"]);
    assert_eq!(v["result"], "11");
    let v = json(&["field", "--k", "2", "--a", "zeta", "--embed", "4"]);
    assert_eq!(v["embedded"], "0110");
}

#[test]
fn curve_and_positions() {
    assert_eq!(json(&["curve", "--k", "2", "--count"])["count"], 9);
    let fixed = json(&["curve", "--k", "2", "--fixed-points"]);
    assert_eq!(fixed["fixed_points"].as_array().unwrap().len(), 3);
    assert_eq!(fixed["fixed_points"][0], "inf");
    let v = json(&["position", "--k", "4", "--i", "1", "--j", "w", "--classify"]);
    assert_eq!(v["v"], 4);
    assert_eq!(v["vb_disc"], -768);
    assert_eq!(v["in_P1F4"], false);
    let v = json(&["position", "--k", "4", "--i", "1", "--j", "w^5"]);
    assert_eq!((v["v"].clone(), v["containing_curve"].clone()), (3.into(), 4.into()));
    let a = json(&["artin", "--k", "4", "--i", "0", "--j", "1"]);
    assert_eq!((a["sigma0"].clone(), a["disc_pic"].clone()), (1.into(), (-4).into()));
}

#[test]
fn lattice_commands() {
    let v = json(&["lattice", "--gram", "[[0,1],[1,0]]", "--det"]);
    assert_eq!(v["det"], -1);
    let v = json(&["lattice", "--gram", "[[2,4],[4,2]]", "--snf"]);
    assert_eq!(v["snf"], serde_json::json!([2, 6]));
    assert_eq!(kf(&["lattice", "--gram", "[[1,2],[3,4]]"]).status.code(), Some(1));
    assert_eq!(kf(&["lattice", "--gram", "nope"]).status.code(), Some(1));
}

#[test]
fn pencil_commands() {
    let base = ["pencil", "--p", "2", "--n", "2", "--r", "1,0,0", "--s", "0,0,1"];
    let v = json(&[&base[..], &["--count-sigma1", "--brute-force", "4"]].concat());
    assert_eq!(v["sigma1_fiber_count"], 5);
    assert_eq!(v["brute_force_count"], 5);
    assert_eq!(v["lie_splitting"], serde_json::json!([-4, 2]));
    let v = json(&[&base[..], &["--hb-verify", "--max-degree", "6"]].concat());
    assert_eq!(v["hb_verify"]["passed"], true);
    assert_eq!(v["hb_exactness"]["exact"], false);
    assert_eq!(v["hb_exactness"]["phi2_injective_and_reduced_ok"], true);
    assert_eq!(v["hb_exactness"]["cokernel_twists"], serde_json::json!([4, -2]));

    let common_zero = kf(&["pencil", "--p", "2", "--n", "2", "--r", "1,0,0", "--s", "0,1,0", "--count-sigma1"]);
    assert_eq!(common_zero.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&common_zero.stderr).contains("common zero"));
    let v = json(&["pencil", "--p", "2", "--n", "1", "--r", "1,0", "--s", "0,1"]);
    assert_eq!(v["omega"]["twist"], -1);
}

#[test]
fn linearize_from_file() {
    let dir = std::env::temp_dir().join(format!("kf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.series");
    std::fs::write(&path, "# (zeta^2 u + v^3, zeta v)\nzeta^2:1,0 + 1:0,3\nzeta:0,1\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["linearize", "--k", "2", "--m", "3", "--order", "6", "--f", p]);
    assert_eq!(v["weights"], serde_json::json!([2, 1]));
    assert_eq!(v["change"][0], "10:1,0 + 11:0,3");
    let bad = kf(&["linearize", "--k", "2", "--m", "2", "--order", "6", "--f", p]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_and_text_output() {
    let v = json(&["report", "--p", "2", "--n", "2", "--r", "1,0,0", "--s", "0,0,1"]);
    assert_eq!(v["cited_claims"][0]["status"], "cited, not computed");
    let v = json(&["report", "--p", "3", "--n", "1", "--r", "1,0", "--s", "0,1"]);
    assert_eq!(v["fiber_classification"]["status"], "not applicable in characteristic 3");
    let text = kf(&["report", "--p", "2", "--table", "--text"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.lines().any(|l| l == "euler: 48"));
    assert!(text.lines().any(|l| l == "rho: 23"));
    assert_eq!(kf(&["report", "--p", "2", "--n", "1", "--r", "1,0", "--s", "0,1"]).status.code(), Some(1));
}

#[test]
fn usage_errors() {
    assert_eq!(kf(&[]).status.code(), Some(1));
    assert_eq!(kf(&["bogus"]).status.code(), Some(1));
    assert_eq!(kf(&["curve"]).status.code(), Some(1));
    assert_eq!(kf(&["--json", "--text", "curve", "--k", "2"]).status.code(), Some(1));
    assert_eq!(kf(&["field", "--p", "5", "--k", "1"]).status.code(), Some(1));
    assert_eq!(kf(&["--help"]).status.code(), Some(0));
    assert_eq!(kf(&["--version"]).status.code(), Some(0));
}
