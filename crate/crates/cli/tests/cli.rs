//! End-to-end runs of the `latstab` binary.

use std::process::{Command, Output};

fn latstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latstab"))
        .args(args)
        .env_remove("LATSTAB_EPS")
        .output()
        .unwrap()
}

fn latstab_env(args: &[&str], eps: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latstab"))
        .args(args)
        .env("LATSTAB_EPS", eps)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_unit_square_is_tight() {
    let o = latstab(&["verify", "--alphas", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"g\":9,\"rhs\":9,\"lambdas\":[\"1\",\"1\"],\"status\":\"tight\",\"ambiguous\":0}\n");
}

#[test]
fn verify_schema_keys_are_stable() {
    let v = json(&latstab(&["verify", "--alphas", "2.3,1.7"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["ambiguous", "g", "lambdas", "rhs", "status"]);
    assert_eq!(v["lambdas"], serde_json::json!(["10/23", "10/17"]));
    assert_eq!((v["g"].as_u64(), v["rhs"].as_u64()), (Some(15), Some(20)));
    assert_eq!(v["status"], "strict");
}

#[test]
fn rotated_square_loses_its_corners() {
    let o = latstab(&["verify", "--alphas", "1,1", "--rotate-givens", "0,1,0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["g"].as_u64(), v["rhs"].as_u64()), (Some(5), Some(9)));
    assert_eq!(v["status"], "strict");
}

#[test]
fn stability_and_threshold_reports() {
    let v = json(&latstab(&["stability-radius", "--alphas", "0.5,0.5,0.5,0.5"]));
    assert_eq!(v["delta"], "1/2");
    assert_eq!(v["radius"].as_f64(), Some(0.5));
    assert_eq!(v["circumradius"].as_f64(), Some(1.0));

    let v = json(&latstab(&["lp-threshold", "--alphas", "1.5,1.5"]));
    assert!((v["p0"].as_f64().unwrap() - 1.709_511).abs() < 1e-6);
    assert_eq!(v["excluded"], serde_json::json!([]));
    assert!((v["beta_max"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);

    let v = json(&latstab(&["lp-threshold", "--alphas", "0.4,0.4,1.5"]));
    assert_eq!(v["excluded"], serde_json::json!([0, 1]));
    assert_eq!(v["p0"].as_f64(), Some(1.0));
}

#[test]
fn integer_axis_is_rejected_by_threshold() {
    let o = latstab(&["lp-threshold", "--alphas", "1,1.5"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("lp") && err.contains("integer"), "{err}");
}

#[test]
fn rotation_sweep_csv_is_reproducible() {
    let args = ["rotation-sweep", "--alphas", "2.3,1.7", "--seed", "11", "--samples", "20"];
    let a = latstab(&args);
    let b = latstab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("opnorm,g,rhs,status,corner_excluded"));
    assert_eq!(lines.count(), 20);
    let other = latstab(&["rotation-sweep", "--alphas", "2.3,1.7", "--seed", "12", "--samples", "20"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn givens_sweep_over_a_plane() {
    let o = latstab(&["rotation-sweep", "--alphas", "1,1", "--plane", "0,1", "--thetas", "0.01,0.02,0.05"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",5,9,strict,true")), "{text}");
}

#[test]
fn lp_sweep_outputs() {
    let text = stdout(&latstab(&["lp-sweep", "--alphas", "1,1.5", "--ps", "2,4,inf"]));
    assert_eq!(text, "p,count,ambiguous,matches_box\n2,5,0,false\n4,5,0,false\ninf,9,0,true\n");
    let v = json(&latstab(&["lp-sweep", "--alphas", "1.5,1.5", "--format", "json"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["matches_box"] == true));
}

#[test]
fn count_and_minima() {
    let v = json(&latstab(&["count", "--alphas", "1.5,1.5", "--p", "2"]));
    assert_eq!((v["count"].as_u64(), v["ambiguous"].as_u64()), (Some(9), Some(0)));
    let v = json(&latstab(&["minima", "--alphas", "2.3,1.7"]));
    assert_eq!(v["lambdas"], serde_json::json!(["10/23", "10/17"]));
    assert_eq!(v["witnesses"], serde_json::json!([[1, 0], [0, 1]]));
}

#[test]
fn sandwich_check_reports_both_bound_pairs() {
    let v = json(&latstab(&["sandwich-check", "--alphas", "2,1", "--matrix", "1,0.05;0,1"]));
    for key in ["eps", "eps_prime", "base", "image", "lower_ok", "upper_ok", "derived_lower_ok", "derived_upper_ok"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!((v["eps"].as_f64().unwrap() - 0.025).abs() < 1e-12);
}

#[test]
fn ambiguous_verdicts_exit_three() {
    let o = latstab(&["--eps", "0.1", "verify", "--alphas", "1,1", "--rotate-givens", "0,1,0.01"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["status"], "boundary-ambiguous");
    let o = latstab(&["count", "--alphas", "1.5,1.5", "--p", "1.7095112913514547"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eps_flag_beats_env_beats_default() {
    let args = ["verify", "--alphas", "1,1", "--rotate-givens", "0,1,0.01"];
    assert_eq!(latstab(&args).status.code(), Some(0));
    assert_eq!(latstab_env(&args, "0.1").status.code(), Some(3));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--eps", "1e-9"]);
    assert_eq!(latstab_env(&with_flag, "0.1").status.code(), Some(0));
}

#[test]
fn usage_errors_name_the_flag_and_exit_one() {
    let o = latstab(&["verify", "--alphas", "2.3,x"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--alphas") && err.contains("semi-axis #2"), "{err}");

    let o = latstab(&["verify", "--alphas", "1,1", "--rotate-givens", "0,2,0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--rotate-givens"));

    let o = latstab(&["verify", "--alphas", "1,1", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--p"));

    assert_eq!(latstab(&["verify", "--alphas", "1", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(latstab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(latstab(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_writes_the_same_bytes_as_stdout() {
    let path = std::env::temp_dir().join(format!("latstab-cli-{}.json", std::process::id()));
    let o = latstab(&["verify", "--alphas", "2.3,1.7", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, latstab(&["verify", "--alphas", "2.3,1.7"]).stdout);
}
