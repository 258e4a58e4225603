//! Anytime-valid confidence sequences for averaged stochastic approximation.
//!
//! The crate runs the SA recursion `x_{t+1} = x_t - eta_t G(x_t, xi_{t+1})`
//! with Polyak-Ruppert averaging, estimates the sandwich covariance
//! `H^{-1} S H^{-1}` online, and wraps the averaged iterate in one of three
//! time-uniform boundaries (union-bound LIL, Gaussian mixture, epsilon-net
//! LIL) or the classical fixed-time interval. The [`harness`] module runs the
//! Monte-Carlo coverage experiments behind the `sacs` binary.
//!
//! Linear algebra, boundaries, the SA engine and the covariance estimator are
//! generic over [`Scalar`] (`f32` or `f64`); the harness works in `f64`.

pub mod boundaries;
pub mod covariance;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod sa;
mod scalar;

pub use boundaries::{BoundaryKind, BoundarySpec, CsEvaluation, NormKind, Subset};
pub use covariance::PluginEstimate;
pub use error::{Error, Result};
pub use numerics::{EigenDecomp, SymMatrix};
pub use sa::{Datum, ModelKind, ModelSpec, RngStream, SaState, StepSchedule};
pub use scalar::Scalar;

pub type Mat = SymMatrix<f64>;
pub type Mat32 = SymMatrix<f32>;
pub type Eigen = EigenDecomp<f64>;
pub type Model = ModelSpec<f64>;
pub type Schedule = StepSchedule<f64>;
pub type State = SaState<f64>;
pub type Boundary = BoundarySpec<f64>;
pub type Evaluation = CsEvaluation<f64>;
pub type Estimate = PluginEstimate<f64>;
