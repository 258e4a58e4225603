use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use super::schedule::StepSchedule;
use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Linear,
    Logistic,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ModelKind::Linear),
            "logistic" => Ok(ModelKind::Logistic),
            other => Err(Error::config(format!("unknown model {other:?}"))),
        }
    }
}

/// One observation `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Datum<T> {
    pub x: Vec<T>,
    pub y: T,
}

/// Regression model generating the data stream and its SA oracles.
///
/// Covariates are i.i.d. uniform on `[-h, h]^d`. Linear responses are
/// `y = x^T theta* + N(0, noise_sd^2)`; logistic responses are Bernoulli with
/// success probability `sigmoid(x^T theta*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec<T> {
    pub kind: ModelKind,
    pub theta_star: Vec<T>,
    /// Only used by the linear model.
    pub noise_sd: T,
    pub cov_halfwidth: T,
}

#[inline]
pub(crate) fn sigmoid<T: Scalar>(u: T) -> T {
    if u >= T::zero() {
        T::one() / (T::one() + (-u).exp())
    } else {
        let e = u.exp();
        e / (T::one() + e)
    }
}

#[inline]
fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

impl<T: Scalar> ModelSpec<T> {
    /// `theta* = (1, ..., d)`, covariates on `[-10, 10]^d`, noise variance 16.
    pub fn linear(dim: usize) -> Self {
        Self {
            kind: ModelKind::Linear,
            theta_star: (1..=dim).map(T::from_usize_lossy).collect(),
            noise_sd: T::lit(4.0),
            cov_halfwidth: T::lit(10.0),
        }
    }

    /// `theta* = (1, ..., d)`, covariates on `[-0.5, 0.5]^d`.
    pub fn logistic(dim: usize) -> Self {
        Self {
            kind: ModelKind::Logistic,
            theta_star: (1..=dim).map(T::from_usize_lossy).collect(),
            noise_sd: T::zero(),
            cov_halfwidth: T::lit(0.5),
        }
    }

    pub fn new(kind: ModelKind, dim: usize) -> Self {
        match kind {
            ModelKind::Linear => Self::linear(dim),
            ModelKind::Logistic => Self::logistic(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.theta_star.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::config("model dimension must be >= 1"));
        }
        if self.theta_star.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("theta_star must be finite"));
        }
        if !(self.cov_halfwidth > T::zero()) || !self.cov_halfwidth.is_finite() {
            return Err(Error::config("covariate half-width must be positive"));
        }
        if !(self.noise_sd >= T::zero()) || !self.noise_sd.is_finite() {
            return Err(Error::config("noise_sd must be finite and >= 0"));
        }
        Ok(())
    }

    /// Step schedule used when none is given: `a = 0.67` and `eta0 = 0.01`
    /// (linear) or `eta0 = 20` (logistic).
    pub fn default_schedule(&self) -> StepSchedule<T> {
        let eta0 = match self.kind {
            ModelKind::Linear => 0.01,
            ModelKind::Logistic => 20.0,
        };
        StepSchedule::new(T::lit(eta0), T::lit(0.67)).expect("default schedule is valid")
    }

    pub fn sample_datum(&self, rng: &mut RngStream) -> Datum<T> {
        let mut datum = Datum {
            x: vec![T::zero(); self.dim()],
            y: T::zero(),
        };
        self.sample_into(rng, &mut datum);
        datum
    }

    pub(crate) fn sample_into(&self, rng: &mut RngStream, datum: &mut Datum<T>) {
        let h = self.cov_halfwidth.to_f64_lossy();
        for xi in datum.x.iter_mut() {
            *xi = T::lit(rng.uniform(-h, h));
        }
        let mean = dot(&datum.x, &self.theta_star);
        datum.y = match self.kind {
            ModelKind::Linear => mean + self.noise_sd * T::lit(rng.standard_normal()),
            ModelKind::Logistic => {
                if rng.bernoulli(sigmoid(mean).to_f64_lossy()) {
                    T::one()
                } else {
                    T::zero()
                }
            }
        };
    }

    /// Stochastic gradient `G(x, xi)`: `-(y - X^T x) X` for the linear model and
    /// `X (sigmoid(X^T x) - y)` for the logistic model. Both are gradients of
    /// the per-sample loss, so `x - eta G` descends.
    pub fn grad_oracle(&self, x: &[T], xi: &Datum<T>) -> Vec<T> {
        let mut g = vec![T::zero(); self.dim()];
        self.grad_into(x, xi, &mut g);
        g
    }

    pub(crate) fn grad_into(&self, x: &[T], xi: &Datum<T>, out: &mut [T]) {
        let u = dot(&xi.x, x);
        let w = match self.kind {
            ModelKind::Linear => u - xi.y,
            ModelKind::Logistic => sigmoid(u) - xi.y,
        };
        for (o, &xj) in out.iter_mut().zip(&xi.x) {
            *o = w * xj;
        }
    }

    /// Per-sample Jacobian of [`Self::grad_oracle`] in `x`.
    pub fn jac_oracle(&self, x: &[T], xi: &Datum<T>) -> SymMatrix<T> {
        let mut m = SymMatrix::zeros(self.dim());
        self.accumulate_jac(x, xi, &mut m);
        m
    }

    pub(crate) fn accumulate_jac(&self, x: &[T], xi: &Datum<T>, acc: &mut SymMatrix<T>) {
        let w = match self.kind {
            ModelKind::Linear => T::one(),
            ModelKind::Logistic => {
                let s = sigmoid(dot(&xi.x, x));
                s * (T::one() - s)
            }
        };
        acc.add_outer(&xi.x, w);
    }

    pub fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}
