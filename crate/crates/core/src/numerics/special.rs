//! Scalar special functions used by the boundaries.

use std::f64::consts::{E, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lower real branch `W_{-1}(x)` of the Lambert W function on `[-1/e, 0)`.
///
/// Returns the solution `z <= -1` of `z e^z = x`. The solve keeps a bracket
/// `[lo, -1]` that is only ever shrunk: Halley steps are accepted when they
/// land strictly inside it, otherwise the step is a bisection.
pub fn lambert_w_m1<T: Scalar>(x: T) -> Result<T> {
    let branch = -T::one() / T::lit(E);
    let slack = T::lit(4.0) * T::epsilon() * branch.abs();
    if !x.is_finite() || x >= T::zero() || x < branch - slack {
        return Err(Error::domain(format!(
            "lambert_w_m1 needs -1/e <= x < 0, got {x}"
        )));
    }
    if x <= branch {
        return Ok(-T::one());
    }

    let f = |z: T| z * z.exp() - x;
    let tol = T::rel_tol(1e-12) * x.abs();

    // z e^z is decreasing on (-inf, -1]: f(hi) <= 0 and f(lo) > 0 bracket the root.
    let l1 = (-x).ln();
    let seed = (l1 - (-l1).ln()).min(-T::one());
    let mut hi = -T::one();
    let mut lo = seed.min(-T::lit(2.0));
    while f(lo) <= T::zero() {
        hi = lo;
        lo = lo * T::lit(2.0);
    }
    let mut z = if seed > lo && seed < hi { seed } else { (lo + hi) * T::lit(0.5) };

    for _ in 0..500 {
        let fz = f(z);
        if fz.abs() <= tol {
            return Ok(z);
        }
        if fz > T::zero() {
            lo = z;
        } else {
            hi = z;
        }
        let ez = z.exp();
        let d1 = ez * (z + T::one());
        let d2 = ez * (z + T::lit(2.0));
        let denom = d1 - fz * d2 / (T::lit(2.0) * d1);
        let halley = z - fz / denom;
        let next = if halley.is_finite() && halley > lo && halley < hi {
            halley
        } else {
            (lo + hi) * T::lit(0.5)
        };
        if next == z || hi - lo <= T::epsilon() * z.abs() {
            return Ok(next);
        }
        z = next;
    }
    Ok(z)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `C_d = d 2^d Gamma((d+1)/2) / pi^{(d-1)/2}`, the covering-number constant
/// of the epsilon-net boundary.
pub fn c_d_constant(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("c_d_constant needs d >= 1"));
    }
    let df = d as f64;
    let log_c = df.ln() + df * 2f64.ln() + ln_gamma((df + 1.0) / 2.0)
        - (df - 1.0) / 2.0 * PI.ln();
    Ok(log_c.exp())
}

/// Volume of the ellipsoid `sum x_i^2 / a_i^2 <= 1`:
/// `(2/d) pi^{d/2} / Gamma(d/2) * prod a_i`.
pub fn ellipsoid_volume(semi_axes: &[f64]) -> Result<f64> {
    if semi_axes.is_empty() {
        return Err(Error::domain("ellipsoid needs at least one axis"));
    }
    if let Some(bad) = semi_axes.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(Error::domain(format!("semi-axis must be positive, got {bad}")));
    }
    let d = semi_axes.len() as f64;
    let log_axes: f64 = semi_axes.iter().map(|a| a.ln()).sum();
    let log_v = 2f64.ln() - d.ln() + d / 2.0 * PI.ln() - ln_gamma(d / 2.0) + log_axes;
    Ok(log_v.exp())
}

// Acklam's rational approximation to the normal quantile (relative error
// below 1.2e-9), followed by one Newton step against libm's erfc.
const ACKLAM_A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const ACKLAM_B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const ACKLAM_C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const ACKLAM_D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const ACKLAM_P_LOW: f64 = 0.02425;

fn acklam(p: f64) -> f64 {
    let [a0, a1, a2, a3, a4, a5] = ACKLAM_A;
    let [b0, b1, b2, b3, b4] = ACKLAM_B;
    let [c0, c1, c2, c3, c4, c5] = ACKLAM_C;
    let [d0, d1, d2, d3] = ACKLAM_D;
    if p < ACKLAM_P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((c0 * q + c1) * q + c2) * q + c3) * q + c4) * q + c5)
            / ((((d0 * q + d1) * q + d2) * q + d3) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((a0 * r + a1) * r + a2) * r + a3) * r + a4) * r + a5) * q
            / (((((b0 * r + b1) * r + b2) * r + b3) * r + b4) * r + 1.0)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal quantile `Phi^{-1}(p)` for `0 < p < 1`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("normal_quantile needs 0 < p < 1, got {p}")));
    }
    if p > 0.5 {
        // 1 - p is exact for p in [0.5, 1].
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let x = acklam(p);
    let err = normal_cdf(x) - p;
    let density = (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
    x - err / density
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn w_branch_point() {
        assert_eq!(lambert_w_m1(-1.0 / E).unwrap(), -1.0);
    }

    #[test]
    fn w_exact_point() {
        let z = lambert_w_m1(-2.0 * (-2.0f64).exp()).unwrap();
        assert_relative_eq!(z, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn w_alpha_point() {
        // Bisection on z e^z = -(0.05)^2 / e in 30-digit arithmetic.
        let z = lambert_w_m1(-(0.05f64).powi(2) / E).unwrap();
        assert_relative_eq!(z, -9.211_968_062_068_254, epsilon = 1e-11);
    }

    #[test]
    fn w_domain() {
        assert!(lambert_w_m1(0.0).is_err());
        assert!(lambert_w_m1(0.1).is_err());
        assert!(lambert_w_m1(-0.5).is_err());
        assert!(lambert_w_m1(f64::NAN).is_err());
    }

    #[test]
    fn w_in_f32() {
        let z = lambert_w_m1(-(0.05f32).powi(2) / std::f32::consts::E).unwrap();
        assert!((z + 9.211_968).abs() < 1e-4);
    }

    #[test]
    fn w_residual_grid() {
        let lo = -1.0 / E;
        let hi = -1e-8;
        for k in 1..=1000 {
            let x = lo + (hi - lo) * (k as f64) / 1001.0;
            let z = lambert_w_m1(x).unwrap();
            assert!(z <= -1.0);
            let resid = (z * z.exp() - x).abs();
            assert!(resid <= 1e-12 * x.abs(), "x={x} z={z} resid={resid}");
        }
    }

    #[test]
    fn c_d_values() {
        assert_relative_eq!(c_d_constant(1).unwrap(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(c_d_constant(2).unwrap(), 4.0, max_relative = 1e-12);
        assert_relative_eq!(c_d_constant(3).unwrap(), 24.0 / PI, max_relative = 1e-12);
        assert!(c_d_constant(0).is_err());
    }

    #[test]
    fn ellipsoid_values() {
        assert_relative_eq!(ellipsoid_volume(&[1.0]).unwrap(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(ellipsoid_volume(&[1.0, 1.0]).unwrap(), PI, max_relative = 1e-12);
        assert_relative_eq!(
            ellipsoid_volume(&[1.0, 2.0, 3.0]).unwrap(),
            8.0 * PI,
            max_relative = 1e-12
        );
        assert!(ellipsoid_volume(&[1.0, 0.0]).is_err());
        assert!(ellipsoid_volume(&[1.0, -2.0]).is_err());
    }

    #[test]
    fn ellipsoid_matches_ball() {
        for d in 1..=8 {
            for &r in &[0.3f64, 1.0, 2.5] {
                let axes = vec![r; d];
                let df = d as f64;
                let ball = r.powi(d as i32) * PI.powf(df / 2.0) / ln_gamma(df / 2.0 + 1.0).exp();
                assert_relative_eq!(ellipsoid_volume(&axes).unwrap(), ball, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn quantile_values() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        // 30-digit sqrt(2) erfinv(2p - 1).
        assert!((normal_quantile(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-12);
        assert!((normal_quantile(0.9).unwrap() - 1.281_551_565_544_601).abs() < 1e-12);
        assert!((normal_quantile(0.025).unwrap() + 1.959_963_984_540_054).abs() < 1e-12);
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
    }

    #[test]
    fn quantile_inverts_cdf() {
        for k in 1..1000 {
            let p = k as f64 / 1000.0;
            let x = normal_quantile(p).unwrap();
            assert!((normal_cdf(x) - p).abs() < 1e-13, "p={p}");
        }
        for &p in &[1e-10, 1e-6, 1e-3] {
            let x = normal_quantile(p).unwrap();
            assert_relative_eq!(normal_cdf(x), p, max_relative = 1e-9);
        }
    }
}
