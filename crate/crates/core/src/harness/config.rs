use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::boundaries::{BoundarySpec, Subset};
use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::sa::{ModelSpec, StepSchedule};

/// Plug-in coverage experiment around SA trajectories started at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec<f64>,
    pub schedule: StepSchedule<f64>,
    pub iters: u64,
    pub reps: u64,
    /// First evaluation time `m`; time-uniform coverage is over `[m, t]`.
    pub start: u64,
    pub stride: u64,
    pub boundaries: Vec<BoundarySpec<f64>>,
    pub seed: u64,
    pub subset: Subset,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Linear or logistic desk configuration: `T = 2e4`, `R = 500`, `m = 1000`,
    /// stride 10, all four boundaries at `alpha`.
    pub fn desk(model: ModelSpec<f64>, alpha: f64, seed: u64) -> Result<Self> {
        let boundaries = crate::boundaries::BoundaryKind::ALL
            .into_iter()
            .map(|k| BoundarySpec::with_defaults(k, alpha))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schedule: model.default_schedule(),
            model,
            iters: 20_000,
            reps: 500,
            start: 1000,
            stride: 10,
            boundaries,
            seed,
            subset: Subset::All,
            output: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.start < 1 {
            return Err(Error::config("start must be >= 1"));
        }
        if self.stride < 1 {
            return Err(Error::config("stride must be >= 1"));
        }
        if self.reps < 1 {
            return Err(Error::config("reps must be >= 1"));
        }
        if self.start > self.iters {
            return Err(Error::config(format!(
                "start {} exceeds iteration count {}",
                self.start, self.iters
            )));
        }
        validate_boundaries(&self.boundaries)?;
        self.subset.resolve(self.model.dim())?;
        Ok(())
    }
}

/// Gaussian sample-mean experiment with known covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianConfig {
    pub cov: SymMatrix<f64>,
    pub horizon: u64,
    pub reps: u64,
    pub stride: u64,
    pub boundaries: Vec<BoundarySpec<f64>>,
    pub seed: u64,
    /// Multiplies every radius; 1 for the real check.
    pub radius_scale: f64,
}

impl GaussianConfig {
    pub fn new(
        cov: SymMatrix<f64>,
        horizon: u64,
        reps: u64,
        boundaries: Vec<BoundarySpec<f64>>,
        seed: u64,
    ) -> Self {
        Self {
            cov,
            horizon,
            reps,
            stride: 1,
            boundaries,
            seed,
            radius_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cov.dim() == 0 {
            return Err(Error::config("covariance dimension must be >= 1"));
        }
        if self.horizon < 1 {
            return Err(Error::config("horizon must be >= 1"));
        }
        if self.reps < 1 {
            return Err(Error::config("reps must be >= 1"));
        }
        if self.stride < 1 {
            return Err(Error::config("stride must be >= 1"));
        }
        if !(self.radius_scale > 0.0) || !self.radius_scale.is_finite() {
            return Err(Error::config("radius scale must be positive"));
        }
        validate_boundaries(&self.boundaries)
    }
}

fn validate_boundaries(boundaries: &[BoundarySpec<f64>]) -> Result<()> {
    if boundaries.is_empty() {
        return Err(Error::config("at least one boundary is required"));
    }
    for (i, b) in boundaries.iter().enumerate() {
        b.validate()?;
        if boundaries[..i].iter().any(|o| o.kind == b.kind) {
            return Err(Error::config(format!("boundary {} listed twice", b.kind)));
        }
    }
    Ok(())
}

/// `m, m + stride, ...` up to `end`, with `end` always included.
pub fn evaluation_grid(start: u64, stride: u64, end: u64) -> Vec<u64> {
    if start > end || stride == 0 {
        return Vec::new();
    }
    let mut grid: Vec<u64> = (start..=end).step_by(stride as usize).collect();
    if grid.last() != Some(&end) {
        grid.push(end);
    }
    grid
}
