use std::io::Write;

use serde::{Deserialize, Serialize};

use super::report::fmt_sig;
use crate::sa::validate_rate_condition;

/// Negative exponents of the error terms in the Gaussian approximation of
/// the averaged iterate, for `eta_t ~ t^{-a}`, `lambda`-Hölder Jacobian and
/// `p` finite noise moments (`p` may be infinite).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateProfile {
    pub a: f64,
    pub lambda: f64,
    pub p: f64,
    pub dim: usize,
    pub linear: bool,
    /// Initial-condition term.
    pub e1: f64,
    /// Jacobian-linearization term; absent for linear problems.
    pub e2: Option<f64>,
    /// Martingale-remainder term.
    pub e3: f64,
    /// Step-size bias term.
    pub e4: f64,
    /// Strong Gaussian coupling term.
    pub e5: f64,
    /// Minimum over the applicable terms.
    pub overall: f64,
    pub a_opt: f64,
    pub r_opt: f64,
    /// Set when the inputs violate the moment/step-size condition.
    pub violation: Option<String>,
}

/// `1/p`, with `1/inf = 0`.
fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// `(p - 1)/p`, exactly 1 at `p = inf`.
fn frac(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        (p - 1.0) / p
    }
}

pub fn rate_exponents(a: f64, lambda: f64, p: f64, dim: usize, linear: bool) -> RateProfile {
    let violation = validate_rate_condition(a, lambda, p, linear).err().map(|v| v.0);
    let e1 = 1.0;
    let e2 = (!linear).then(|| a * (1.0 + lambda) / 2.0);
    let e3 = (2.0 - a) / 2.0 - inv(p) / 2.0;
    let e4 = (1.0 + a) / 2.0;
    let e5 = if dim == 1 {
        0.5 + frac(p) / 4.0
    } else {
        0.5 + frac(p) / (50.0 * dim as f64)
    };
    let overall = [Some(e1), e2, Some(e3), Some(e4), Some(e5)]
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    let (a_opt, r_opt) = if linear {
        if p.is_infinite() {
            (0.5, 0.75)
        } else {
            ((p - 1.0) / (2.0 * p), (3.0 * p - 1.0) / (4.0 * p))
        }
    } else if p.is_infinite() {
        (2.0 / (2.0 + lambda), (1.0 + lambda) / (2.0 + lambda))
    } else {
        (
            (2.0 * p - 1.0) / ((2.0 + lambda) * p),
            (1.0 + lambda) * (2.0 * p - 1.0) / (2.0 * (2.0 + lambda) * p),
        )
    };
    RateProfile {
        a,
        lambda,
        p,
        dim,
        linear,
        e1,
        e2,
        e3,
        e4,
        e5,
        overall,
        a_opt,
        r_opt,
        violation,
    }
}

pub const RATE_HEADER: [&str; 14] = [
    "a", "lambda", "p", "dim", "linear", "e1", "e2", "e3", "e4", "e5", "overall", "a_opt",
    "r_opt", "violation",
];

/// Writes profiles as CSV; absent `e2` and `violation` are empty fields.
pub fn write_rate_table<W: Write>(profiles: &[RateProfile], sink: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(RATE_HEADER)?;
    for r in profiles {
        w.write_record([
            fmt_sig(r.a),
            fmt_sig(r.lambda),
            fmt_sig(r.p),
            r.dim.to_string(),
            r.linear.to_string(),
            fmt_sig(r.e1),
            r.e2.map(fmt_sig).unwrap_or_default(),
            fmt_sig(r.e3),
            fmt_sig(r.e4),
            fmt_sig(r.e5),
            fmt_sig(r.overall),
            fmt_sig(r.a_opt),
            fmt_sig(r.r_opt),
            r.violation.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()
}
