use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sacs");

fn sacs(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn sacs")
}

fn csv_to(path: &Path, args: &[&str]) -> Vec<u8> {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--out", path.to_str().unwrap()]);
    let out = sacs(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn coverage_micro_run_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "coverage", "--dim", "2", "--iters", "1500", "--reps", "10", "--start", "100", "--stride",
        "25", "--seed", "3",
    ];
    let a = csv_to(&dir.path().join("a.csv"), &args);
    let b = csv_to(&dir.path().join("b.csv"), &args);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(
        "t,boundary_kind,radius_mean,fixed_coverage,uniform_coverage,halfwidth_mean,reps_effective\n"
    ));
    // 57 grid points (100, 125, ..., 1500) times four boundaries.
    assert_eq!(text.lines().count(), 1 + 57 * 4);
    assert!(text.lines().last().unwrap().starts_with("1500,fixed,"));
}

#[test]
fn seed_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["coverage", "--iters", "800", "--reps", "10", "--start", "100"];
    let mut a_args = base.to_vec();
    a_args.extend(["--seed", "1"]);
    let mut b_args = base.to_vec();
    b_args.extend(["--seed", "2"]);
    let a = csv_to(&dir.path().join("a.csv"), &a_args);
    let b = csv_to(&dir.path().join("b.csv"), &b_args);
    assert_ne!(a, b);
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = sacs(&[
        "coverage", "--iters", "500", "--reps", "4", "--start", "100", "--stride", "100",
        "--boundaries", "gm,fixed", "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5 * 2);
    assert_eq!(v["rows"][0]["boundary_kind"], "gm");
    assert_eq!(v["meta"]["reps_requested"], 4);
}

#[test]
fn gaussian_check_reads_covariance_file() {
    let dir = tempfile::tempdir().unwrap();
    let cov = dir.path().join("cov.txt");
    std::fs::write(&cov, "2\n2 1\n1 2\n").unwrap();
    let out = dir.path().join("g.csv");
    let text = String::from_utf8(csv_to(
        &out,
        &[
            "gaussian-check", "--cov", cov.to_str().unwrap(), "--horizon", "100", "--reps", "20",
            "--boundaries", "gm", "--stride", "10",
        ],
    ))
    .unwrap();
    // 1, 11, ..., 91 and the horizon.
    assert_eq!(text.lines().count(), 1 + 11);
    assert!(text.lines().nth(1).unwrap().starts_with("1,gm,"));

    let mismatch = sacs(&["gaussian-check", "--cov", cov.to_str().unwrap(), "--dim", "3"]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn rates_golden_rows() {
    let out = sacs(&["rates", "--nonlinear", "--a", "0.6666666666666666", "--lambda", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert_eq!(
        row,
        "0.666666667,1,inf,1,false,1,0.666666667,0.666666667,0.833333333,0.75,0.666666667,0.666666667,0.666666667,"
    );
    let grid = sacs(&["rates", "--linear", "--p", "10", "--grid", "0.1:0.9:5"]);
    let text = String::from_utf8(grid.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().last().unwrap().contains(",a >= (p-1)/p"));
}

#[test]
fn run_trace_has_checkpoints() {
    let out = sacs(&["run", "--iters", "1000", "--checkpoints", "every:100", "--dim", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,error_norm,xbar_0,xbar_1,h_hat_00,h_hat_11,sandwich_00,sandwich_11"
    );
    assert_eq!(lines.count(), 10);
}

#[test]
fn exit_codes() {
    assert_eq!(sacs(&["coverage", "--model", "probit"]).status.code(), Some(2));
    assert_eq!(sacs(&["coverage", "--a", "0.4"]).status.code(), Some(2));
    assert_eq!(sacs(&["coverage", "--stride", "0"]).status.code(), Some(2));
    assert_eq!(sacs(&["rates"]).status.code(), Some(2));
    assert_eq!(sacs(&["run", "--checkpoints", "every:0"]).status.code(), Some(2));
    assert_eq!(sacs(&["not-a-command"]).status.code(), Some(2));
    assert_eq!(
        sacs(&["gaussian-check", "--cov", "/nonexistent/cov.txt"]).status.code(),
        Some(4)
    );
    assert_eq!(
        sacs(&["run", "--iters", "10", "--out", "/nonexistent/dir/x.csv"]).status.code(),
        Some(4)
    );
    let diverge = sacs(&[
        "coverage", "--eta0", "10000", "--a", "0.51", "--iters", "300", "--reps", "3", "--start",
        "100",
    ]);
    assert_eq!(diverge.status.code(), Some(3));
    let singular = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(singular.path(), "2\n1 1\n1 1\n").unwrap();
    assert_eq!(
        sacs(&["gaussian-check", "--cov", singular.path().to_str().unwrap()]).status.code(),
        Some(3)
    );
}
