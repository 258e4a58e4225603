use sacs::boundaries::{BoundaryKind, BoundarySpec};
use sacs::harness::{
    emit_report, fit_rate, gaussian_endpoints, run_coverage, run_gaussian_check, CoverageReport,
    ExperimentConfig, GaussianConfig, OutputFormat, CSV_HEADER,
};
use sacs::sa::{dyadic_checkpoints, run_trajectory};
use sacs::{Error, Mat, Model, RngStream};

const TIME_UNIFORM: [BoundaryKind; 3] = [BoundaryKind::LilUb, BoundaryKind::Gm, BoundaryKind::LilEn];

fn specs(alpha: f64) -> Vec<BoundarySpec<f64>> {
    BoundaryKind::ALL
        .into_iter()
        .map(|k| BoundarySpec::with_defaults(k, alpha).unwrap())
        .collect()
}

fn se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

#[test]
fn gaussian_scalar_coverage_at_five_percent() {
    let cfg = GaussianConfig::new(Mat::identity(1), 10_000, 2000, specs(0.05), 41);
    let report = run_gaussian_check(&cfg).unwrap();
    let floor = 0.95 - 2.0 * se(0.05, 2000);
    for kind in TIME_UNIFORM {
        let cov = report.final_row(kind).unwrap().uniform_coverage;
        assert!(cov >= floor, "{kind}: {cov} < {floor}");
    }
}

#[test]
fn gaussian_coverage_at_loose_level() {
    let cfg = GaussianConfig::new(Mat::identity(1), 2_000, 1000, specs(0.5), 42);
    let report = run_gaussian_check(&cfg).unwrap();
    let floor = 0.5 - 2.0 * se(0.5, 1000);
    for kind in TIME_UNIFORM {
        let cov = report.final_row(kind).unwrap().uniform_coverage;
        assert!(cov >= floor, "{kind}: {cov} < {floor}");
    }
}

#[test]
fn gaussian_sample_mean_is_centered() {
    let cov = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
    let cfg = GaussianConfig::new(cov, 400, 2000, specs(0.05), 43);
    let ends = gaussian_endpoints(&cfg).unwrap();
    let n = ends.len() as f64;
    for i in 0..2 {
        let mean = ends.iter().map(|m| m[i]).sum::<f64>() / n;
        // Var(M_horizon_i) = 2 / 400.
        let stderr = (2.0 / 400.0 / n).sqrt();
        assert!(mean.abs() <= 3.0 * stderr, "coordinate {i}: {mean}");
    }
}

#[test]
fn linear_error_decays_at_root_t() {
    let model = Model::linear(1);
    let schedule = model.default_schedule();
    let iters = 100_000;
    let checkpoints = dyadic_checkpoints(iters);
    let mut errors = vec![Vec::new(); checkpoints.len()];
    let mut sandwich_err = vec![Vec::new(); checkpoints.len()];
    for seed in 0..200 {
        let mut rng = RngStream::new(seed, 0);
        let trace = run_trajectory(&model, &schedule, iters, &checkpoints, &[0.0], &mut rng).unwrap();
        for (k, p) in trace.iter().enumerate() {
            errors[k].push(p.error_norm);
            let v = p.estimate.sandwich.as_ref().map_or(f64::INFINITY, |s| s.get(0, 0));
            sandwich_err[k].push((v - 0.48).abs());
        }
    }
    let points: Vec<(f64, f64)> = checkpoints
        .iter()
        .zip(errors)
        .map(|(&t, e)| (t as f64, median(e)))
        .collect();
    let slope = fit_rate(&points, (1e3, 1e5)).unwrap();
    assert!((-0.65..=-0.40).contains(&slope), "slope {slope}");

    // The plug-in sandwich gets more accurate along the trajectory.
    let at = |t: u64| {
        let k = checkpoints.iter().position(|&c| c == t).unwrap();
        median(sandwich_err[k].clone())
    };
    assert!(at(1024) > at(16384), "{} vs {}", at(1024), at(16384));
    assert!(at(16384) > at(100_000) || at(100_000) < 0.02);
}

#[test]
fn logistic_coverage_with_default_step_size() {
    let cfg = ExperimentConfig::desk(Model::logistic(1), 0.05, 2026).unwrap();
    assert_eq!(cfg.schedule.eta0(), 20.0);
    let report = run_coverage(&cfg).unwrap();
    for kind in TIME_UNIFORM {
        let cov = report.final_row(kind).unwrap().uniform_coverage;
        assert!(cov >= 0.92, "{kind}: {cov}");
    }
    assert!(report.final_row(BoundaryKind::FixedTime).unwrap().uniform_coverage < 0.90);
}

fn micro_report() -> CoverageReport {
    let mut cfg = ExperimentConfig::desk(Model::linear(2), 0.05, 9).unwrap();
    cfg.iters = 1000;
    cfg.reps = 10;
    cfg.start = 100;
    cfg.stride = 50;
    run_coverage(&cfg).unwrap()
}

#[test]
fn report_files_round_trip() {
    let report = micro_report();
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("r.csv");
    emit_report(&report, OutputFormat::Csv, &csv_path).unwrap();
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), report.rows.len());

    let json_path = dir.path().join("r.json");
    emit_report(&report, OutputFormat::Json, &json_path).unwrap();
    let back: CoverageReport =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(back.rows, report.rounded().rows);
    assert_eq!(back.meta.reps_requested, 10);
}

#[test]
fn report_io_error_names_the_path() {
    let report = micro_report();
    let path = std::path::Path::new("/nonexistent-dir/out.csv");
    match emit_report(&report, OutputFormat::Csv, path) {
        Err(e @ Error::Io { .. }) => {
            assert_eq!(e.exit_code(), 4);
            assert!(e.to_string().contains("/nonexistent-dir/out.csv"));
        }
        other => panic!("expected an I/O error, got {other:?}"),
    }
}

#[test]
fn violated_report_is_not_written() {
    let mut report = micro_report();
    let last = report.rows.len() - 1;
    report.rows[last].uniform_coverage = 1.0;
    report.rows[last].fixed_coverage = 1.0;
    report.rows[0].uniform_coverage = 0.0;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    assert!(matches!(
        emit_report(&report, OutputFormat::Csv, &path),
        Err(Error::Invariant(_))
    ));
    assert!(!path.exists());
}
