use std::f64::consts::E;

use super::mixture::lambda_star;
use crate::error::{Error, Result};
use crate::numerics::{c_d_constant, normal_quantile};
use crate::scalar::Scalar;

/// `log log x` with the argument clamped at `e`, so the term is never negative.
fn loglog<T: Scalar>(x: T) -> T {
    x.max(T::lit(E)).ln().ln()
}

fn check_common<T: Scalar>(t: T, d: usize, alpha: T) -> Result<()> {
    if !(t >= T::one()) || !t.is_finite() {
        return Err(Error::domain(format!("boundary time must be >= 1, got {t}")));
    }
    if d == 0 {
        return Err(Error::domain("boundary dimension must be >= 1"));
    }
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

fn sqrt_radicand<T: Scalar>(name: &str, radicand: T, t: T) -> Result<T> {
    if !(radicand > T::zero()) {
        return Err(Error::UndefinedBoundary(format!(
            "{name} radicand {radicand} <= 0 at t={t}"
        )));
    }
    Ok((radicand / t).sqrt())
}

/// Union-bound LIL radius for the sup norm of the whitened mean.
pub fn radius_lil_ub<T: Scalar>(t: T, d: usize, alpha: T) -> Result<T> {
    check_common(t, d, alpha)?;
    let d = T::from_usize_lossy(d);
    let radicand = loglog(T::lit(2.0) * t) + T::lit(0.72) * (T::lit(10.4) * d / alpha).ln();
    Ok(T::lit(1.7) * sqrt_radicand("lil-ub", radicand, t)?)
}

/// Gaussian-mixture radius for the two norm, tuned to minimize region volume at `t0`.
pub fn radius_gm<T: Scalar>(t: T, d: usize, alpha: T, t0: T) -> Result<T> {
    check_common(t, d, alpha)?;
    if !(t0 >= T::one()) || !t0.is_finite() {
        return Err(Error::domain(format!("t0 must be >= 1, got {t0}")));
    }
    let lam = lambda_star(alpha)?;
    let d = T::from_usize_lossy(d);
    let ratio = t * lam / t0;
    let radicand = (T::one() + T::one() / ratio)
        * (d * ratio.ln_1p() + T::lit(2.0) * (T::one() / alpha).ln());
    sqrt_radicand("gm", radicand, t)
}

/// Epsilon-net LIL radius for the two norm; `kappa` is the condition number
/// of the covariance being whitened.
pub fn radius_lil_en<T: Scalar>(t: T, d: usize, alpha: T, eps_net: T, kappa: T) -> Result<T> {
    check_common(t, d, alpha)?;
    if !(eps_net > T::zero() && eps_net < T::one()) {
        return Err(Error::domain(format!("eps_net must lie in (0, 1), got {eps_net}")));
    }
    if !(kappa >= T::one()) || !kappa.is_finite() {
        return Err(Error::domain(format!("condition number must be >= 1, got {kappa}")));
    }
    let c_d = T::lit(c_d_constant(d)?);
    let dm1 = T::from_usize_lossy(d - 1);
    let net = (T::lit(5.2) * c_d / alpha).ln()
        + dm1 * (T::lit(3.0) * kappa.sqrt() / eps_net).ln();
    let radicand = T::lit(1.4) * loglog(T::lit(2.0) * t * kappa) + net;
    Ok(T::lit(2.0) / (T::one() - eps_net) * sqrt_radicand("lil-en", radicand, t)?)
}

/// Classical pointwise interval radius `z_{1 - alpha/2} / sqrt(t)`.
pub fn radius_fixed<T: Scalar>(t: T, alpha: T) -> Result<T> {
    check_common(t, 1, alpha)?;
    if !(alpha < T::one()) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let z = normal_quantile(1.0 - alpha.to_f64_lossy() / 2.0)?;
    Ok(T::lit(z) / t.sqrt())
}
