//! The stochastic approximation recursion with built-in regression oracles.

mod model;
mod rng;
mod schedule;
mod state;

pub use model::{Datum, ModelKind, ModelSpec};
pub use rng::RngStream;
pub use schedule::{validate_rate_condition, RateViolation, StepSchedule};
pub use state::{dyadic_checkpoints, every_checkpoints, run_trajectory, SaState, TracePoint};

