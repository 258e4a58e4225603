use serde::{Deserialize, Serialize};

use super::model::{Datum, ModelSpec};
use super::rng::RngStream;
use super::schedule::StepSchedule;
use crate::covariance::{plugin_estimate, PluginEstimate};
use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::scalar::Scalar;

/// State of the SA recursion after `t` updates.
///
/// `xbar` is the mean of `x_1..x_t` (the initializer is not averaged).
/// `h_sum` and `s_sum` accumulate `H(x_j, xi_{j+1})` and `G G^T` evaluated at
/// the pre-update iterate of every step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaState<T> {
    t: u64,
    x: Vec<T>,
    xbar: Vec<T>,
    h_sum: SymMatrix<T>,
    s_sum: SymMatrix<T>,
    #[serde(skip)]
    scratch: Scratch<T>,
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Scratch<T> {
    datum: Option<Datum<T>>,
    grad: Vec<T>,
}

impl<T: Scalar> SaState<T> {
    pub fn new(x0: &[T]) -> Self {
        let d = x0.len();
        Self {
            t: 0,
            x: x0.to_vec(),
            xbar: vec![T::zero(); d],
            h_sum: SymMatrix::zeros(d),
            s_sum: SymMatrix::zeros(d),
            scratch: Scratch {
                datum: None,
                grad: vec![T::zero(); d],
            },
        }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn xbar(&self) -> &[T] {
        &self.xbar
    }

    pub fn h_sum(&self) -> &SymMatrix<T> {
        &self.h_sum
    }

    pub fn s_sum(&self) -> &SymMatrix<T> {
        &self.s_sum
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// One SA update with a freshly drawn datum.
    pub fn step(
        &mut self,
        schedule: &StepSchedule<T>,
        model: &ModelSpec<T>,
        rng: &mut RngStream,
    ) -> Result<()> {
        let mut datum = self.scratch.datum.take().unwrap_or_else(|| Datum {
            x: vec![T::zero(); model.dim()],
            y: T::zero(),
        });
        model.sample_into(rng, &mut datum);
        let out = self.step_with(schedule, model, &datum);
        self.scratch.datum = Some(datum);
        out
    }

    /// One SA update with a given datum `xi_{t+1}`.
    pub fn step_with(
        &mut self,
        schedule: &StepSchedule<T>,
        model: &ModelSpec<T>,
        xi: &Datum<T>,
    ) -> Result<()> {
        model.check_dim(self.dim())?;
        model.check_dim(xi.x.len())?;
        let eta = schedule.step_size(self.t);

        let mut grad = std::mem::take(&mut self.scratch.grad);
        grad.resize(self.dim(), T::zero());
        model.grad_into(&self.x, xi, &mut grad);
        model.accumulate_jac(&self.x, xi, &mut self.h_sum);
        self.s_sum.add_outer(&grad, T::one());

        for (xj, &gj) in self.x.iter_mut().zip(&grad) {
            *xj = *xj - eta * gj;
        }
        self.scratch.grad = grad;
        self.t += 1;

        if self.x.iter().any(|v| !v.is_finite()) {
            let norm = self
                .x
                .iter()
                .fold(0.0, |acc, v| acc + v.to_f64_lossy().powi(2))
                .sqrt();
            return Err(Error::Divergence { t: self.t, norm });
        }
        let inv_t = T::one() / T::from_u64(self.t).expect("t representable");
        for (m, &xj) in self.xbar.iter_mut().zip(&self.x) {
            *m = *m + (xj - *m) * inv_t;
        }
        Ok(())
    }

    pub fn estimate(&self) -> Result<PluginEstimate<T>> {
        plugin_estimate(self)
    }
}

/// Snapshot of a trajectory at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint<T> {
    pub t: u64,
    pub xbar: Vec<T>,
    pub estimate: PluginEstimate<T>,
    /// `||xbar_t - theta*||_2`.
    pub error_norm: T,
}

/// Runs `iters` SA steps from `x0` and records the listed checkpoints.
///
/// Checkpoints must be strictly ascending and lie in `[1, iters]`.
pub fn run_trajectory<T: Scalar>(
    model: &ModelSpec<T>,
    schedule: &StepSchedule<T>,
    iters: u64,
    checkpoints: &[u64],
    x0: &[T],
    rng: &mut RngStream,
) -> Result<Vec<TracePoint<T>>> {
    model.validate()?;
    model.check_dim(x0.len())?;
    validate_checkpoints(checkpoints, iters)?;

    let mut state = SaState::new(x0);
    let mut trace = Vec::with_capacity(checkpoints.len());
    for &cp in checkpoints {
        while state.t() < cp {
            state.step(schedule, model, rng)?;
        }
        let error_norm = state
            .xbar()
            .iter()
            .zip(&model.theta_star)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
            .sqrt();
        trace.push(TracePoint {
            t: cp,
            xbar: state.xbar().to_vec(),
            estimate: state.estimate()?,
            error_norm,
        });
    }
    Ok(trace)
}

pub(crate) fn validate_checkpoints(checkpoints: &[u64], iters: u64) -> Result<()> {
    if let Some(&first) = checkpoints.first() {
        if first == 0 {
            return Err(Error::config("checkpoints start at 1"));
        }
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("checkpoints must be strictly ascending"));
    }
    if let Some(&last) = checkpoints.last() {
        if last > iters {
            return Err(Error::config(format!(
                "checkpoint {last} exceeds iteration count {iters}"
            )));
        }
    }
    Ok(())
}

/// `1, 2, 4, ...` up to `iters`, always ending at `iters`.
pub fn dyadic_checkpoints(iters: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 1u64;
    while t < iters {
        out.push(t);
        t = t.saturating_mul(2);
    }
    if iters >= 1 {
        out.push(iters);
    }
    out
}

/// `k, 2k, ...` up to `iters`, always ending at `iters`.
pub fn every_checkpoints(k: u64, iters: u64) -> Vec<u64> {
    let k = k.max(1);
    let mut out: Vec<u64> = (1..=iters / k).map(|i| i * k).collect();
    if iters >= 1 && out.last() != Some(&iters) {
        out.push(iters);
    }
    out
}
