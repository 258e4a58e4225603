//! Cyclic Jacobi eigensolver and the spectral functions built on it.
//!
//! Dimensions here are small (the covariance of a handful of regression
//! coefficients), so the solver favors robustness over speed. Everything
//! that needs positive definiteness goes through [`EigenDecomp::check_pd`],
//! which rejects matrices with `lambda_min <= 1e-12 * lambda_max`.

use serde::{Deserialize, Serialize};

use super::matrix::SymMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative off-diagonal tolerance for Jacobi convergence.
pub const JACOBI_TOL: f64 = 1e-13;

/// Relative eigenvalue floor below which a matrix counts as singular.
pub const PD_TOL: f64 = 1e-12;

/// Eigen-decomposition `Q diag(values) Q^T` with ascending `values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomp<T> {
    pub values: Vec<T>,
    /// Row-major `d x d`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Vec<T>,
}

impl<T: Scalar> EigenDecomp<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<T> {
        let d = self.dim();
        (0..d).map(|i| self.vectors[i * d + j]).collect()
    }

    pub fn min_value(&self) -> T {
        self.values[0]
    }

    pub fn max_value(&self) -> T {
        self.values[self.dim() - 1]
    }

    /// Fails unless `lambda_min > tol * lambda_max` and `lambda_max > 0`.
    pub fn check_pd_with(&self, rel_tol: f64) -> Result<()> {
        let (min, max) = (self.min_value(), self.max_value());
        if !(max > T::zero()) || !(min > T::rel_tol(rel_tol) * max) {
            return Err(Error::Singular {
                min: min.to_f64_lossy(),
                max: max.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn check_pd(&self) -> Result<()> {
        self.check_pd_with(PD_TOL)
    }

    /// `Q diag(f(values)) Q^T`.
    pub fn compose(&self, f: impl Fn(T) -> T) -> SymMatrix<T> {
        let d = self.dim();
        let mapped: Vec<T> = self.values.iter().map(|&v| f(v)).collect();
        let mut out = vec![T::zero(); d * d];
        for i in 0..d {
            for j in i..d {
                let mut acc = T::zero();
                for k in 0..d {
                    acc = acc + self.vectors[i * d + k] * mapped[k] * self.vectors[j * d + k];
                }
                out[i * d + j] = acc;
                out[j * d + i] = acc;
            }
        }
        SymMatrix::from_general(d, &out)
    }
}

/// Full eigen-decomposition by cyclic Jacobi rotations.
pub fn sym_eig<T: Scalar>(m: &SymMatrix<T>) -> Result<EigenDecomp<T>> {
    let d = m.dim();
    if d == 0 {
        return Err(Error::domain("eigendecomposition of an empty matrix"));
    }
    if !m.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let mut a = m.as_slice().to_vec();
    let mut v = SymMatrix::<T>::identity(d).as_slice().to_vec();
    let tol = T::rel_tol(JACOBI_TOL);
    let max_sweeps = 100 * d * d;

    let mut converged = false;
    for _ in 0..=max_sweeps {
        let (off, diag) = norms(&a, d);
        if off <= tol * diag {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, d, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: max_sweeps });
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[i * d + i].partial_cmp(&a[j * d + j]).unwrap());
    let values = order.iter().map(|&k| a[k * d + k]).collect();
    let mut vectors = vec![T::zero(); d * d];
    for (new, &old) in order.iter().enumerate() {
        for i in 0..d {
            vectors[i * d + new] = v[i * d + old];
        }
    }
    Ok(EigenDecomp { values, vectors })
}

fn norms<T: Scalar>(a: &[T], d: usize) -> (T, T) {
    let mut off = T::zero();
    let mut diag = T::zero();
    for i in 0..d {
        for j in 0..d {
            let x = a[i * d + j];
            if i == j {
                diag = diag + x * x;
            } else {
                off = off + x * x;
            }
        }
    }
    (off.sqrt(), diag.sqrt())
}

fn rotate<T: Scalar>(a: &mut [T], v: &mut [T], d: usize, p: usize, q: usize) {
    let apq = a[p * d + q];
    if apq == T::zero() {
        return;
    }
    let app = a[p * d + p];
    let aqq = a[q * d + q];
    let theta = (aqq - app) / (T::lit(2.0) * apq);
    let sign = if theta < T::zero() { -T::one() } else { T::one() };
    let t = sign / (theta.abs() + theta.hypot(T::one()));
    let c = T::one() / t.hypot(T::one());
    let s = t * c;

    for k in 0..d {
        let akp = a[k * d + p];
        let akq = a[k * d + q];
        a[k * d + p] = c * akp - s * akq;
        a[k * d + q] = s * akp + c * akq;
    }
    for k in 0..d {
        let apk = a[p * d + k];
        let aqk = a[q * d + k];
        a[p * d + k] = c * apk - s * aqk;
        a[q * d + k] = s * apk + c * aqk;
    }
    a[p * d + q] = T::zero();
    a[q * d + p] = T::zero();

    for k in 0..d {
        let vkp = v[k * d + p];
        let vkq = v[k * d + q];
        v[k * d + p] = c * vkp - s * vkq;
        v[k * d + q] = s * vkp + c * vkq;
    }
}

/// Whitening matrix `M^{-1/2}`.
pub fn inv_sqrt<T: Scalar>(m: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    let eig = sym_eig(m)?;
    eig.check_pd()?;
    Ok(eig.compose(|x| T::one() / x.sqrt()))
}

/// Principal square root `M^{1/2}` of a positive definite matrix.
pub fn sqrt_pd<T: Scalar>(m: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    let eig = sym_eig(m)?;
    eig.check_pd()?;
    Ok(eig.compose(|x| x.sqrt()))
}

pub fn inverse_pd<T: Scalar>(m: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    let eig = sym_eig(m)?;
    eig.check_pd()?;
    Ok(eig.compose(|x| T::one() / x))
}

pub fn log_det<T: Scalar>(m: &SymMatrix<T>) -> Result<T> {
    let eig = sym_eig(m)?;
    eig.check_pd()?;
    Ok(eig.values.iter().fold(T::zero(), |acc, v| acc + v.ln()))
}

/// Spectral condition number `lambda_max / lambda_min`.
pub fn cond<T: Scalar>(m: &SymMatrix<T>) -> Result<T> {
    let eig = sym_eig(m)?;
    eig.check_pd()?;
    Ok((eig.max_value() / eig.min_value()).max(T::one()))
}
