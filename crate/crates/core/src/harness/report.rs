use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boundaries::BoundaryKind;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 7] = [
    "t",
    "boundary_kind",
    "radius_mean",
    "fixed_coverage",
    "uniform_coverage",
    "halfwidth_mean",
    "reps_effective",
];

const SIG_DIGITS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config(format!("unknown format {other:?}"))),
        }
    }
}

/// One `(t, boundary)` cell aggregated over repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub t: u64,
    pub boundary_kind: BoundaryKind,
    /// Mean radius over repetitions where the region was available.
    pub radius_mean: f64,
    /// Fraction of repetitions covering `x*` at `t`.
    pub fixed_coverage: f64,
    /// Fraction of repetitions covering `x*` at every evaluation time in `[m, t]`.
    pub uniform_coverage: f64,
    /// Mean half-width along the first selected coordinate.
    pub halfwidth_mean: f64,
    /// Mean half-width along every selected coordinate.
    pub halfwidths_mean: Vec<f64>,
    pub reps_effective: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub experiment: String,
    pub config: serde_json::Value,
    pub seed: u64,
    /// How per-repetition randomness is derived from `seed`.
    pub streams: String,
    pub reps_requested: u64,
    pub reps_diverged: u64,
    /// Evaluations where the plug-in covariance was singular, per boundary.
    /// These count as misses.
    pub unavailable: Vec<(BoundaryKind, u64)>,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
    pub meta: ReportMeta,
}

impl CoverageReport {
    pub fn rows_for(&self, kind: BoundaryKind) -> impl Iterator<Item = &CoverageRow> {
        self.rows.iter().filter(move |r| r.boundary_kind == kind)
    }

    /// Last row for `kind`, i.e. the one at the final evaluation time.
    pub fn final_row(&self, kind: BoundaryKind) -> Option<&CoverageRow> {
        self.rows_for(kind).last()
    }

    /// Rates lie in `[0, 1]` and time-uniform coverage never increases in `t`.
    pub fn check_invariants(&self) -> Result<()> {
        let mut last: Vec<(BoundaryKind, u64, f64)> = Vec::new();
        for row in &self.rows {
            for (name, v) in [
                ("fixed_coverage", row.fixed_coverage),
                ("uniform_coverage", row.uniform_coverage),
            ] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Invariant(format!(
                        "{name} {v} outside [0, 1] at t={} for {}",
                        row.t, row.boundary_kind
                    )));
                }
            }
            if row.uniform_coverage > row.fixed_coverage {
                return Err(Error::Invariant(format!(
                    "uniform coverage exceeds fixed coverage at t={} for {}",
                    row.t, row.boundary_kind
                )));
            }
            match last.iter_mut().find(|(k, _, _)| *k == row.boundary_kind) {
                Some((_, t, u)) => {
                    if row.t <= *t {
                        return Err(Error::Invariant(format!(
                            "rows for {} are not ascending in t",
                            row.boundary_kind
                        )));
                    }
                    if row.uniform_coverage > *u {
                        return Err(Error::Invariant(format!(
                            "uniform coverage for {} rises from {} to {} at t={}",
                            row.boundary_kind, u, row.uniform_coverage, row.t
                        )));
                    }
                    *t = row.t;
                    *u = row.uniform_coverage;
                }
                None => last.push((row.boundary_kind, row.t, row.uniform_coverage)),
            }
        }
        Ok(())
    }

    /// Copy with every float rounded to the printed precision.
    pub fn rounded(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            row.radius_mean = round_sig(row.radius_mean);
            row.fixed_coverage = round_sig(row.fixed_coverage);
            row.uniform_coverage = round_sig(row.uniform_coverage);
            row.halfwidth_mean = round_sig(row.halfwidth_mean);
            for h in &mut row.halfwidths_mean {
                *h = round_sig(*h);
            }
        }
        out.meta.wall_time_secs = round_sig(out.meta.wall_time_secs);
        out
    }
}

/// `%.9g`-style rendering: 9 significant digits, trailing zeros dropped,
/// exponent form outside `[1e-4, 1e9)`.
pub fn fmt_sig(x: f64) -> String {
    fmt_g(x, SIG_DIGITS)
}

fn fmt_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

/// Writes the CSV form to any sink.
pub fn write_csv<W: Write>(report: &CoverageReport, sink: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for row in &report.rows {
        w.write_record([
            row.t.to_string(),
            row.boundary_kind.to_string(),
            fmt_sig(row.radius_mean),
            fmt_sig(row.fixed_coverage),
            fmt_sig(row.uniform_coverage),
            fmt_sig(row.halfwidth_mean),
            row.reps_effective.to_string(),
        ])?;
    }
    w.flush()
}

/// Checks the report invariants, then writes it as CSV or JSON.
pub fn emit_report(report: &CoverageReport, format: OutputFormat, path: &Path) -> Result<()> {
    report.check_invariants()?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut sink = BufWriter::new(file);
    match format {
        OutputFormat::Csv => write_csv(report, &mut sink).map_err(|e| Error::io(path, e))?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, &report.rounded())
                .map_err(|e| Error::io(path, e.into()))?;
            sink.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        }
    }
    sink.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.95), "0.95");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666667");
        assert_eq!(fmt_sig(123456789.0), "123456789");
        assert_eq!(fmt_sig(1234567890.0), "1.23456789e+09");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(0.00001234), "1.234e-05");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(9.9999999999), "10");
    }

    fn row(t: u64, u: f64) -> CoverageRow {
        CoverageRow {
            t,
            boundary_kind: BoundaryKind::Gm,
            radius_mean: 0.1,
            fixed_coverage: 1.0,
            uniform_coverage: u,
            halfwidth_mean: 0.1,
            halfwidths_mean: vec![0.1],
            reps_effective: 4,
        }
    }

    fn report(rows: Vec<CoverageRow>) -> CoverageReport {
        CoverageReport {
            rows,
            meta: ReportMeta {
                experiment: "test".into(),
                config: serde_json::Value::Null,
                seed: 0,
                streams: String::new(),
                reps_requested: 4,
                reps_diverged: 0,
                unavailable: vec![],
                wall_time_secs: 0.0,
            },
        }
    }

    #[test]
    fn monotonicity_is_enforced() {
        assert!(report(vec![row(1, 1.0), row(2, 0.75)]).check_invariants().is_ok());
        assert!(matches!(
            report(vec![row(1, 0.75), row(2, 1.0)]).check_invariants(),
            Err(Error::Invariant(_))
        ));
        assert!(report(vec![row(1, 1.5)]).check_invariants().is_err());
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&report(vec![]), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,boundary_kind,radius_mean,fixed_coverage,uniform_coverage,halfwidth_mean,reps_effective\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let mut r = report(vec![row(10, 0.75)]);
        r.rows[0].radius_mean = 1.0 / 7.0;
        let rounded = r.rounded();
        let text = serde_json::to_string(&rounded).unwrap();
        let back: CoverageReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rounded);
        assert_eq!(back.rows[0].radius_mean, 0.142857143);
    }
}
