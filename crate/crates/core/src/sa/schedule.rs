use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Polynomial step sizes `eta_t = eta0 * (t + 1)^{-a}` with `1/2 < a < 1`.
///
/// The index is shifted by one so the first update (`t = 0`) is well defined;
/// asymptotically this is the same law as `eta0 * t^{-a}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule<T> {
    eta0: T,
    a: T,
}

impl<T: Scalar> StepSchedule<T> {
    pub fn new(eta0: T, a: T) -> Result<Self> {
        if !eta0.is_finite() || eta0 < T::zero() {
            return Err(Error::config(format!("eta0 must be finite and >= 0, got {eta0}")));
        }
        if !(a > T::lit(0.5) && a < T::one()) {
            return Err(Error::config(format!("step exponent must satisfy 1/2 < a < 1, got {a}")));
        }
        Ok(Self { eta0, a })
    }

    pub fn eta0(&self) -> T {
        self.eta0
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn step_size(&self, t: u64) -> T {
        let base = T::from_u64(t).unwrap_or_else(T::infinity) + T::one();
        self.eta0 * base.powf(-self.a)
    }
}

/// A failed inequality of the rate condition on `(a, lambda, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateViolation(pub String);

impl fmt::Display for RateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Checks the rate condition under which the averaged iterate is within
/// `o(t^{-1/2})` of a Gaussian sum.
///
/// Linear problems need `0 < a < (p-1)/p`; nonlinear ones need
/// `p > (1+lambda)/lambda` and `1/(1+lambda) < a < (p-1)/p`. `p` may be
/// `f64::INFINITY`. The step-schedule range `1/2 < a < 1` is enforced
/// separately by [`StepSchedule::new`].
pub fn validate_rate_condition(
    a: f64,
    lambda: f64,
    p: f64,
    linear: bool,
) -> std::result::Result<(), RateViolation> {
    let fail = |s: String| Err(RateViolation(s));
    if !(lambda > 0.0 && lambda <= 1.0) {
        return fail(format!("lambda must lie in (0, 1], got {lambda}"));
    }
    if !(p > 1.0) {
        return fail(format!("moment order must satisfy p > 1, got {p}"));
    }
    if !(a > 0.0 && a < 1.0) {
        return fail(format!("a must lie in (0, 1), got {a}"));
    }
    let upper = if p.is_infinite() { 1.0 } else { (p - 1.0) / p };
    if !linear {
        let p_min = (1.0 + lambda) / lambda;
        if p <= p_min {
            return fail(format!("p <= (1+lambda)/lambda ({p} <= {p_min})"));
        }
        let a_min = 1.0 / (1.0 + lambda);
        if a <= a_min {
            return fail(format!("a <= 1/(1+lambda) ({a} <= {a_min})"));
        }
    }
    if a >= upper {
        return fail(format!("a >= (p-1)/p ({a} >= {upper})"));
    }
    Ok(())
}
