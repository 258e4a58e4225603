use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::numerics::{inverse_pd, lambert_w_m1, log_det, SymMatrix};
use crate::scalar::Scalar;

/// Mixing scale `lambda* = -W_{-1}(-alpha^2 / e) - 1` of the Gaussian-mixture
/// boundary.
///
/// This is the minimizer of [`gm_volume_objective`] for `d = 1`. For `d > 1`
/// the objective is minimized by [`lambda_star_for_dim`] instead; the radius
/// stays valid for any positive scale.
pub fn lambda_star<T: Scalar>(alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let w = lambert_w_m1(-(alpha * alpha) / T::lit(E))?;
    Ok((-w - T::one()).max(T::min_positive_value()))
}

/// Minimizer of [`gm_volume_objective`] in dimension `d`:
/// `-W_{-1}(-alpha^{2/d} / e) - 1`. Equals [`lambda_star`] at `d = 1`.
pub fn lambda_star_for_dim<T: Scalar>(alpha: T, d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::domain("dimension must be >= 1"));
    }
    let root = alpha.powf(T::one() / T::from_usize_lossy(d));
    lambda_star(root)
}

/// Volume of the mixture region at `t0` as a function of the mixing scale,
/// up to factors that do not depend on it:
/// `((1+lam)/lam)^{d/2} (d log(1+lam) + 2 log(1/alpha))^{d/2}`.
pub fn gm_volume_objective<T: Scalar>(lam: T, d: usize, alpha: T) -> Result<T> {
    if !(lam > T::zero()) || !lam.is_finite() {
        return Err(Error::domain(format!("mixing scale must be positive, got {lam}")));
    }
    if d == 0 {
        return Err(Error::domain("dimension must be >= 1"));
    }
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let df = T::from_usize_lossy(d);
    let half_d = df / T::lit(2.0);
    let base = (T::one() + lam) / lam * (df * lam.ln_1p() + T::lit(2.0) * (T::one() / alpha).ln());
    Ok(base.powf(half_d))
}

/// Log of the Gaussian-mixture martingale
/// `exp(s^T B^{-1} s / 2) / sqrt(det(sigma) det(B))`, `B = t v + sigma^{-1}`,
/// where `s` is the running sum of the increments.
pub fn gm_log_mixture_martingale<T: Scalar>(
    t: T,
    sum_g: &[T],
    v: &SymMatrix<T>,
    sigma: &SymMatrix<T>,
) -> Result<T> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("time must be >= 0, got {t}")));
    }
    if v.dim() != sigma.dim() {
        return Err(Error::Dimension {
            expected: v.dim(),
            got: sigma.dim(),
        });
    }
    let sigma_inv = inverse_pd(sigma)?;
    let b = v.scaled(t).add(&sigma_inv)?;
    let b_inv = inverse_pd(&b)?;
    let quad = b_inv.quad_form(sum_g)?;
    let half = T::lit(0.5);
    Ok(half * quad - half * (log_det(sigma)? + log_det(&b)?))
}

pub fn gm_mixture_martingale<T: Scalar>(
    t: T,
    sum_g: &[T],
    v: &SymMatrix<T>,
    sigma: &SymMatrix<T>,
) -> Result<T> {
    gm_log_mixture_martingale(t, sum_g, v, sigma).map(|l| l.exp())
}
