use std::process::{Command, Output};

use serde_json::Value;

fn betakit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betakit"))
        .args(args)
        .env_remove("BETAKIT_PREC_BITS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = betakit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn midpoint(v: &Value) -> f64 {
    let lo: f64 = v["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = v["hi"].as_str().unwrap().parse().unwrap();
    (lo + hi) / 2.0
}

#[test]
fn tau_example() {
    let v = json(&["tau", "--word", "1,0,1"]);
    assert_eq!(v["tau"], 2);
    assert_eq!(v["full"], false);
    assert_eq!(v["schema"], "betakit/1");
}

#[test]
fn count_example() {
    let v = json(&["count", "--ceiling-word", "1,1", "--n", "3"]);
    assert_eq!(v["count"], "5");
}

#[test]
fn cylinder_example() {
    let v = json(&["cylinder", "--word", "1,1", "--prec-bits", "128"]);
    assert!((midpoint(&v["beta0"]) - 1.6180339887).abs() < 1e-9);
    assert_eq!(v["beta1"]["lo"], "2");
    assert_eq!(v["beta1"]["hi"], "2");
    assert!((midpoint(&v["length"]) - 0.3819660113).abs() < 1e-9);
    assert_eq!(v["length_bounds"], "holds");
}

#[test]
fn expand_of_one_for_golden() {
    let v = json(&["expand1", "--beta-word", "1,1", "--depth", "6"]);
    assert_eq!(v["digits"], serde_json::json!([1, 1, 0, 0, 0, 0]));
    assert_eq!(v["star"], serde_json::json!([1, 0, 1, 0, 1, 0]));
    assert_eq!(v["simple_parry"], 2);
}

#[test]
fn expand_rational_point() {
    let v = json(&["expand", "--beta", "2", "--x", "1/3", "--depth", "6"]);
    assert_eq!(v["digits"], serde_json::json!([0, 1, 0, 1, 0, 1]));
    assert_eq!(v["certified_depth"], 6);
}

#[test]
fn admissibility_against_golden() {
    let v = json(&["admissible", "--word", "1,1", "--ceiling-word", "1,1"]);
    assert_eq!(v["admissible"], false);
    let v = json(&["admissible", "--word", "1,0,1", "--beta-word", "1,1"]);
    assert_eq!(v["admissible"], true);
    let v = json(&["self-admissible", "--word", "1,0,1,1"]);
    assert_eq!(v["self_admissible"], false);
}

#[test]
fn extension_is_periodic() {
    let v = json(&["extend", "--word", "1,1,0", "--length", "7"]);
    assert_eq!(v["extension"], serde_json::json!([1, 1, 0, 1, 1, 0, 1]));
}

#[test]
fn walk_csv_header_and_tiling() {
    let out = betakit(&["walk", "--depth", "4", "--window", "1.5:2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("word,n,tau,beta0,beta1,length,regular"));
    let v = json(&["walk", "--depth", "4", "--window", "1.5:2"]);
    assert_eq!(v["tiling"], "holds");
    assert_eq!(v["count"].as_u64().unwrap() as usize, text.lines().count() - 1);
}

#[test]
fn cover_csv_header() {
    let out = betakit(&["cover", "--depth", "5", "--window", "1.9:2", "--x0", "0", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("word,n,lo,hi,length"));
}

#[test]
fn dim_report_keys() {
    let v = json(&["dim", "--depths", "4,6", "--window", "1.9:2", "--x0", "0"]);
    for key in ["depth", "s_star", "theory", "window_bound"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["depth"], 6);
    assert_eq!(v["theory"], 0.5);
}

#[test]
fn lipschitz_target_and_rate_file() {
    let dir = std::env::temp_dir().join(format!("betakit-rate-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rate.txt");
    std::fs::write(&path, "# l_n\n1\n2\n3\n4\n5\n").unwrap();
    let v = json(&[
        "cover",
        "--depth",
        "5",
        "--window",
        "1.9:2",
        "--target-lipschitz",
        "-1+1*beta",
        "--rate-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(v["target"]["kind"], "affine");
    assert_eq!(v["ell"], 5);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn witness_example() {
    let v = json(&["witness-x1", "--word", "1,0,0", "--z", "2"]);
    assert_eq!(v["hit"], "holds");
    assert_eq!(v["self_admissible"], true);
    assert_eq!(v["radius_exponent"], 6);
}

#[test]
fn zeros_report() {
    let v = json(&["zeros", "--beta-word", "1,0,0,0,0,0,0,0,0,0,1", "--depth", "30"]);
    assert_eq!(v["runs"][0], 10);
}

#[test]
fn output_is_deterministic() {
    let args = ["walk", "--depth", "5", "--window", "1.6:1.9"];
    let a = betakit(&args);
    let b = betakit(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("betakit-out-{}.json", std::process::id()));
    let out = betakit(&["tau", "--word", "1,1,0", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["tau"], 3);
    let _ = std::fs::remove_file(path);
}

#[test]
fn env_sets_default_precision() {
    let out = Command::new(env!("CARGO_BIN_EXE_betakit"))
        .args(["expand1", "--beta", "3/2", "--depth", "4"])
        .env("BETAKIT_PREC_BITS", "256")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bits"], 256);
}

#[test]
fn exit_codes() {
    assert_eq!(betakit(&["--no-such-flag"]).status.code(), Some(64));
    assert_eq!(betakit(&["tau"]).status.code(), Some(64));
    assert_eq!(betakit(&["walk", "--depth", "3", "--window", "1:2"]).status.code(), Some(64));
    assert_eq!(betakit(&["expand", "--beta", "1/2", "--x", "1/3"]).status.code(), Some(1));
    assert_eq!(betakit(&["tau", "--word", "1,1", "--format", "csv"]).status.code(), Some(64));
    assert_eq!(betakit(&["--help"]).status.code(), Some(0));
}
