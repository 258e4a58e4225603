//! Monte-Carlo experiments and their artifacts.
//!
//! - [`run_coverage`]: plug-in confidence sequences around SA trajectories,
//!   with fixed-time and time-uniform coverage over repetitions.
//! - [`run_gaussian_check`]: the same boundaries against Gaussian sample
//!   means with the true covariance.
//! - [`rate_exponents`]: the five error-term exponents of the Gaussian
//!   approximation and the optimal step-size decay.
//! - [`fit_rate`]: log-log slope of an empirical error curve.
//!
//! Repetition `r` always draws from stream `r` of the run seed, so results do
//! not depend on how many worker threads execute the repetitions.

mod config;
mod covfile;
mod coverage;
mod fit;
mod gaussian;
mod rates;
mod report;

pub use config::{evaluation_grid, ExperimentConfig, GaussianConfig};
pub use covfile::{parse_covariance, read_covariance};
pub use coverage::run_coverage;
pub use fit::fit_rate;
pub use gaussian::{gaussian_endpoints, run_gaussian_check};
pub use rates::{rate_exponents, write_rate_table, RateProfile, RATE_HEADER};
pub use report::{
    emit_report, fmt_sig, write_csv, CoverageReport, CoverageRow, OutputFormat, ReportMeta,
    CSV_HEADER,
};
