use std::process::Command;

use dualbern::cli::{fmt_g17, run};
use dualbern::WeightParams;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dualbern").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn eval_degree_one_midpoint() {
    let (code, out, _) = call(&["eval", "--n", "1", "--alpha", "0", "--beta", "0", "--x", "0.5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0,1\n1,1\n");
}

#[test]
fn eval_degree_zero() {
    let (code, out, _) = call(&["eval", "--n", "0", "--alpha", "0", "--beta", "0", "--x", "0.3"]);
    assert_eq!((code, out.as_str()), (0, "0,1\n"));
}

#[test]
fn eval_outside_interval_is_a_usage_error() {
    let (code, out, err) = call(&["eval", "--n", "2", "--alpha", "0", "--beta", "0", "--x", "1.5"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("outside"), "{err}");
}

#[test]
fn eval_accepts_negative_parameters() {
    let (code, out, _) = call(&["eval", "--n", "2", "--alpha", "-0.5", "--beta", "-0.5", "--x", "0.25"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn grid_single_point() {
    let (code, out, _) = call(&["grid", "--n", "1", "--alpha", "0", "--beta", "0", "--points", "0.5:0.5:0.1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "x,i,value\n0.5,0,1\n0.5,1,1\n");
}

#[test]
fn grid_percent_points_row_count_and_order() {
    let (code, out, _) = call(&["grid", "--n", "3", "--points", "0.01:0.99:0.01"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "x,i,value");
    assert_eq!(rows.len(), 1 + 99 * 4);
    assert!(rows[1].starts_with("0.01,0,"));
    assert!(rows[4].starts_with("0.01,3,"));
    assert!(rows[5].starts_with("0.02,0,"));
    assert!(rows.last().unwrap().starts_with("0.98999999999999999,3,"));
}

#[test]
fn grid_step_beyond_range_gives_one_block() {
    let (code, out, _) = call(&["grid", "--n", "2", "--points", "0.2:0.3:0.5"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 3);
}

#[test]
fn grid_rejects_malformed_spec() {
    for spec in ["0.1:0.2", "x:y:z", "0.1:0.9:0", "0.5:1.5:0.1"] {
        let (code, _, _) = call(&["grid", "--n", "2", "--points", spec]);
        assert_eq!(code, 2, "{spec}");
    }
}

#[test]
fn grid_round_trips_library_values() {
    let (_, out, _) = call(&["grid", "--n", "12", "--preset", "paper-nonstd", "--points", "0.05:0.95:0.15"]);
    let p = WeightParams::new(-0.33, 5.6).unwrap();
    for row in out.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        let x: f64 = f[0].parse().unwrap();
        let i: usize = f[1].parse().unwrap();
        let v: f64 = f[2].parse().unwrap();
        let direct = dualbern::dual_all_at_point(12, &p, &x).unwrap().values[i];
        assert_eq!(v.to_bits(), direct.to_bits(), "{row}");
        assert_eq!(fmt_g17(direct), f[2]);
    }
}

#[test]
fn grid_is_deterministic() {
    let args = ["grid", "--n", "40", "--preset", "chebyshev", "--points", "0.01:0.99:0.07"];
    assert_eq!(call(&args).1, call(&args).1);
}

#[test]
fn experiment_legendre_degree_ten() {
    let (code, out, _) = call(&["experiment", "--n-list", "10", "--preset", "legendre", "--ref-digits", "128"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "n,alpha,beta,precision,mean_acc,p1_acc,min_acc");
    let f: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(&f[..4], ["10", "0", "0", "binary64"]);
    assert!(f[4].parse::<f64>().unwrap() >= 14.0, "{}", rows[1]);
}

#[test]
fn experiment_one_row_per_degree() {
    let (code, out, _) = call(&["experiment", "--n-list", "10,20", "--preset", "chebyshev", "--ref-digits", "128"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().nth(2).unwrap().starts_with("20,-0.5,-0.5,binary64,"));
}

#[test]
fn experiment_mixed_precisions_and_presets() {
    let (code, out, _) = call(&[
        "experiment",
        "--n-list",
        "8",
        "--preset",
        "legendre,paper-nonstd",
        "--precisions",
        "f64,20",
        "--ref-digits",
        "100",
        "--points",
        "0.1:0.9:0.2",
    ]);
    assert_eq!(code, 0, "{out}");
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("8,0,0,20,"));
    assert!(rows[3].starts_with("8,-0.33000000000000002,5.5999999999999996,20,"));
}

#[test]
fn experiment_rejects_reference_too_coarse() {
    let (code, _, err) = call(&["experiment", "--n-list", "10", "--precisions", "40", "--ref-digits", "64"]);
    assert_eq!(code, 2);
    assert!(err.contains("reference digits"), "{err}");
}

#[test]
fn experiment_is_deterministic() {
    let args = ["experiment", "--n-list", "15", "--preset", "paper-nonstd", "--ref-digits", "80"];
    assert_eq!(call(&args).1, call(&args).1);
}

#[test]
fn experiment_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("dualbern-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("acc.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["experiment", "--n-list", "5", "--ref-digits", "64", "--output", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn project_reproduces_identity() {
    let (code, out, _) = call(&["project", "--n", "1", "--fn", "x", "--alpha", "0", "--beta", "0"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "k,I_k");
    let i0: f64 = rows[1].strip_prefix("0,").unwrap().parse().unwrap();
    let i1: f64 = rows[2].strip_prefix("1,").unwrap().parse().unwrap();
    assert!(i0.abs() < 1e-12 && (i1 - 1.0).abs() < 1e-12);
    let e: f64 = rows[3].strip_prefix("error_sq,").unwrap().parse().unwrap();
    assert!(e < 1e-24);
}

#[test]
fn project_constant() {
    let (code, out, _) = call(&["project", "--n", "0", "--fn", "one"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    let i0: f64 = rows[1].strip_prefix("0,").unwrap().parse().unwrap();
    assert!((i0 - 1.0).abs() < 1e-14);
    let e: f64 = rows[2].strip_prefix("error_sq,").unwrap().parse().unwrap();
    assert!(e < 1e-28);
}

#[test]
fn project_rejects_unknown_function_and_negative_parameters() {
    assert_eq!(call(&["project", "--n", "2", "--fn", "nosuch"]).0, 2);
    assert_eq!(call(&["project", "--n", "2", "--fn", "exp", "--alpha", "-0.5"]).0, 2);
    assert_eq!(call(&["project", "--n", "2", "--fn", "exp", "--m", "0"]).0, 2);
}

#[test]
fn presets_expand_exactly() {
    let a = call(&["eval", "--n", "4", "--x", "0.3", "--preset", "paper-nonstd"]).1;
    let b = call(&["eval", "--n", "4", "--x", "0.3", "--alpha", "-0.33", "--beta", "5.6"]).1;
    assert_eq!(a, b);
    let a = call(&["eval", "--n", "4", "--x", "0.3", "--preset", "chebyshev"]).1;
    let b = call(&["eval", "--n", "4", "--x", "0.3", "--alpha", "-0.5", "--beta", "-0.5"]).1;
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["eval", "--n", "two", "--x", "0.5"]).0, 2);
    assert_eq!(call(&["eval", "--n", "2", "--alpha", "-1", "--x", "0.5"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("experiment"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dualbern");
    let ok = Command::new(bin).args(["eval", "--n", "1", "--x", "0.5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "0,1\n1,1\n");
    let bad = Command::new(bin).args(["eval", "--n", "1", "--x", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
