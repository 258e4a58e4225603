//! `sacs` command line: coverage experiments, Gaussian checks, exponent
//! tables and single-trajectory traces.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sacs::boundaries::{BoundaryKind, BoundarySpec, Subset};
use sacs::harness::{
    emit_report, fmt_sig, rate_exponents, read_covariance, run_coverage, run_gaussian_check,
    write_csv, write_rate_table, CoverageReport, ExperimentConfig, GaussianConfig, OutputFormat,
};
use sacs::sa::{dyadic_checkpoints, every_checkpoints, run_trajectory, ModelKind, ModelSpec};
use sacs::{Error, Result, RngStream, StepSchedule, SymMatrix};

#[derive(Parser)]
#[command(name = "sacs", version, about = "Confidence sequences for averaged SA iterates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plug-in coverage of the boundaries around SA trajectories.
    Coverage(CoverageArgs),
    /// Boundary coverage for Gaussian sample means with known covariance.
    GaussianCheck(GaussianArgs),
    /// Error-term exponents and the optimal step-size decay.
    Rates(RatesArgs),
    /// Trace of one SA trajectory.
    Run(RunArgs),
}

#[derive(Args)]
struct BoundaryArgs {
    /// Comma-separated subset of lilub,gm,lilen,fixed.
    #[arg(long, default_value = "lilub,gm,lilen,fixed")]
    boundaries: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Gaussian-mixture tuning time.
    #[arg(long, default_value_t = 100.0)]
    t0: f64,
    /// Epsilon-net resolution.
    #[arg(long = "eps-net", default_value_t = 0.5)]
    eps_net: f64,
}

impl BoundaryArgs {
    fn specs(&self) -> Result<Vec<BoundarySpec<f64>>> {
        self.boundaries
            .split(',')
            .map(|s| {
                let kind: BoundaryKind = s.trim().parse()?;
                BoundarySpec::new(kind, self.alpha, self.t0, self.eps_net)
            })
            .collect()
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "linear")]
    model: String,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Step-size decay exponent; model default when absent.
    #[arg(long)]
    a: Option<f64>,
    /// Initial step size; model default when absent.
    #[arg(long)]
    eta0: Option<f64>,
}

impl ModelArgs {
    fn build(&self) -> Result<(ModelSpec<f64>, StepSchedule<f64>)> {
        let kind: ModelKind = self.model.parse()?;
        let model = ModelSpec::new(kind, self.dim);
        model.validate()?;
        let default = model.default_schedule();
        let schedule = StepSchedule::new(
            self.eta0.unwrap_or(default.eta0()),
            self.a.unwrap_or(default.a()),
        )?;
        Ok((model, schedule))
    }
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bounds: BoundaryArgs,
    #[arg(long, default_value_t = 20_000)]
    iters: u64,
    #[arg(long, default_value_t = 500)]
    reps: u64,
    /// First evaluation time of the time-uniform window.
    #[arg(long, default_value_t = 1000)]
    start: u64,
    #[arg(long, default_value_t = 10)]
    stride: u64,
    /// `all` or comma-separated zero-based coordinates.
    #[arg(long, default_value = "all")]
    subset: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GaussianArgs {
    #[arg(long)]
    dim: Option<usize>,
    /// `identity` or a covariance file.
    #[arg(long, default_value = "identity")]
    cov: String,
    #[command(flatten)]
    bounds: BoundaryArgs,
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
    #[arg(long, default_value_t = 2000)]
    reps: u64,
    #[arg(long, default_value_t = 1)]
    stride: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RatesArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Noise moment order, or `inf`.
    #[arg(long, default_value = "inf")]
    p: String,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, conflicts_with = "nonlinear")]
    linear: bool,
    #[arg(long)]
    nonlinear: bool,
    /// `A_LO:A_HI:STEPS`, evaluated at STEPS evenly spaced values of `a`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 100_000)]
    iters: u64,
    /// `dyadic` or `every:K`.
    #[arg(long, default_value = "dyadic")]
    checkpoints: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coverage(args) => coverage(args),
        Command::GaussianCheck(args) => gaussian(args),
        Command::Rates(args) => rates(args),
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn coverage(args: CoverageArgs) -> Result<()> {
    let (model, schedule) = args.model.build()?;
    let cfg = ExperimentConfig {
        model,
        schedule,
        iters: args.iters,
        reps: args.reps,
        start: args.start,
        stride: args.stride,
        boundaries: args.bounds.specs()?,
        seed: args.seed,
        subset: args.subset.parse::<Subset>()?,
        output: args.out.clone(),
    };
    let report = run_coverage(&cfg)?;
    write_report(&report, args.format.parse()?, args.out.as_deref())
}

fn gaussian(args: GaussianArgs) -> Result<()> {
    let cov = if args.cov == "identity" {
        SymMatrix::identity(args.dim.unwrap_or(1))
    } else {
        let cov = read_covariance(Path::new(&args.cov))?;
        if let Some(d) = args.dim {
            if d != cov.dim() {
                return Err(Error::Dimension {
                    expected: d,
                    got: cov.dim(),
                });
            }
        }
        cov
    };
    let mut cfg = GaussianConfig::new(cov, args.horizon, args.reps, args.bounds.specs()?, args.seed);
    cfg.stride = args.stride;
    let report = run_gaussian_check(&cfg)?;
    write_report(&report, args.format.parse()?, args.out.as_deref())
}

fn rates(args: RatesArgs) -> Result<()> {
    let p = if args.p == "inf" {
        f64::INFINITY
    } else {
        args.p
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad moment order {:?}", args.p)))?
    };
    let linear = !args.nonlinear;
    let values = match (&args.grid, args.a) {
        (Some(grid), _) => parse_grid(grid)?,
        (None, Some(a)) => vec![a],
        (None, None) => return Err(Error::Config("give --a or --grid".into())),
    };
    let profiles: Vec<_> = values
        .into_iter()
        .map(|a| rate_exponents(a, args.lambda, p, args.dim, linear))
        .collect();
    with_sink(args.out.as_deref(), |w| write_rate_table(&profiles, w))
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("grid must be A_LO:A_HI:STEPS, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let steps: usize = steps.parse().map_err(|_| bad())?;
    if steps == 0 || !(hi >= lo) {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn run(args: RunArgs) -> Result<()> {
    let (model, schedule) = args.model.build()?;
    let checkpoints = match args.checkpoints.as_str() {
        "dyadic" => dyadic_checkpoints(args.iters),
        other => {
            let k = other
                .strip_prefix("every:")
                .and_then(|k| k.parse::<u64>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Config(format!("bad checkpoints {other:?}")))?;
            every_checkpoints(k, args.iters)
        }
    };
    let mut rng = RngStream::new(args.seed, 0);
    let x0 = vec![0.0; model.dim()];
    let trace = run_trajectory(&model, &schedule, args.iters, &checkpoints, &x0, &mut rng)?;
    let d = model.dim();
    with_sink(args.out.as_deref(), |w| {
        let mut csv = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string(), "error_norm".to_string()];
        header.extend((0..d).map(|i| format!("xbar_{i}")));
        header.extend((0..d).map(|i| format!("h_hat_{i}{i}")));
        header.extend((0..d).map(|i| format!("sandwich_{i}{i}")));
        csv.write_record(&header)?;
        for p in &trace {
            let mut rec = vec![p.t.to_string(), fmt_sig(p.error_norm)];
            rec.extend(p.xbar.iter().map(|&v| fmt_sig(v)));
            rec.extend(p.estimate.h_hat.diag().into_iter().map(fmt_sig));
            match &p.estimate.sandwich {
                Some(v) => rec.extend(v.diag().into_iter().map(fmt_sig)),
                None => rec.extend((0..d).map(|_| "nan".to_string())),
            }
            csv.write_record(&rec)?;
        }
        csv.flush()
    })
}

fn write_report(report: &CoverageReport, format: OutputFormat, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => emit_report(report, format, path),
        None => {
            report.check_invariants()?;
            with_sink(None, |w| match format {
                OutputFormat::Csv => write_csv(report, w),
                OutputFormat::Json => {
                    serde_json::to_writer_pretty(&mut *w, &report.rounded())?;
                    writeln!(w)
                }
            })
        }
    }
}

/// Runs `f` against the file at `out`, or stdout.
fn with_sink(
    out: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    let io_err = |path: &Path, source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w).map_err(|e| io_err(path, e))?;
            w.flush().map_err(|e| io_err(path, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            f(&mut w).map_err(|e| io_err(Path::new("<stdout>"), e))
        }
    }
}
