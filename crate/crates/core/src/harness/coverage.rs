use std::time::Instant;

use rayon::prelude::*;

use super::config::{evaluation_grid, ExperimentConfig};
use super::report::{CoverageReport, CoverageRow, ReportMeta};
use crate::boundaries::{BoundaryKind, Whitener};
use crate::error::{Error, Result};
use crate::sa::{RngStream, SaState};

/// Repetitions simulated concurrently before their results are folded in
/// repetition order. Bounds memory independently of `reps`.
const CHUNK: usize = 64;

/// One boundary at one evaluation time of one repetition.
#[derive(Debug, Clone)]
pub(super) struct Cell {
    pub radius: f64,
    pub halfwidths: Vec<f64>,
    /// `None` when the region was unavailable.
    pub covered: Option<bool>,
}

/// Per-repetition cells, indexed `[grid point][boundary]`.
pub(super) type RepCells = Vec<Vec<Cell>>;

/// Streaming ordered reduction of [`RepCells`] into report rows.
pub(super) struct Aggregator {
    grid: Vec<u64>,
    kinds: Vec<BoundaryKind>,
    dim: usize,
    radius_sum: Vec<f64>,
    halfwidth_sum: Vec<Vec<f64>>,
    available: Vec<u64>,
    fixed_hits: Vec<u64>,
    uniform_hits: Vec<u64>,
    unavailable: Vec<u64>,
    reps: u64,
}

impl Aggregator {
    pub fn new(grid: Vec<u64>, kinds: Vec<BoundaryKind>, dim: usize) -> Self {
        let n = grid.len() * kinds.len();
        Self {
            radius_sum: vec![0.0; n],
            halfwidth_sum: vec![vec![0.0; dim]; n],
            available: vec![0; n],
            fixed_hits: vec![0; n],
            uniform_hits: vec![0; n],
            unavailable: vec![0; kinds.len()],
            reps: 0,
            grid,
            kinds,
            dim,
        }
    }

    pub fn absorb(&mut self, cells: &RepCells) {
        let nb = self.kinds.len();
        let mut alive = vec![true; nb];
        for (g, row) in cells.iter().enumerate() {
            for (b, cell) in row.iter().enumerate() {
                let idx = g * nb + b;
                match cell.covered {
                    Some(hit) => {
                        self.available[idx] += 1;
                        self.radius_sum[idx] += cell.radius;
                        for (s, h) in self.halfwidth_sum[idx].iter_mut().zip(&cell.halfwidths) {
                            *s += h;
                        }
                        if hit {
                            self.fixed_hits[idx] += 1;
                        } else {
                            alive[b] = false;
                        }
                    }
                    None => {
                        self.unavailable[b] += 1;
                        alive[b] = false;
                    }
                }
                if alive[b] {
                    self.uniform_hits[idx] += 1;
                }
            }
        }
        self.reps += 1;
    }

    pub fn rows(&self) -> Vec<CoverageRow> {
        let nb = self.kinds.len();
        let reps = self.reps as f64;
        let mut rows = Vec::with_capacity(self.grid.len() * nb);
        for (g, &t) in self.grid.iter().enumerate() {
            for (b, &kind) in self.kinds.iter().enumerate() {
                let idx = g * nb + b;
                let n = self.available[idx] as f64;
                let halfwidths_mean: Vec<f64> =
                    self.halfwidth_sum[idx].iter().map(|s| s / n).collect();
                rows.push(CoverageRow {
                    t,
                    boundary_kind: kind,
                    radius_mean: self.radius_sum[idx] / n,
                    fixed_coverage: self.fixed_hits[idx] as f64 / reps,
                    uniform_coverage: self.uniform_hits[idx] as f64 / reps,
                    halfwidth_mean: halfwidths_mean.first().copied().unwrap_or(f64::NAN),
                    halfwidths_mean,
                    reps_effective: self.reps,
                });
            }
        }
        debug_assert!(rows.iter().all(|r| r.halfwidths_mean.len() == self.dim));
        rows
    }

    pub fn unavailable(&self) -> Vec<(BoundaryKind, u64)> {
        self.kinds.iter().copied().zip(self.unavailable.iter().copied()).collect()
    }

    pub fn reps(&self) -> u64 {
        self.reps
    }
}

/// Runs `cfg.reps` independent trajectories and aggregates the coverage of
/// every boundary on the evaluation grid `{m, m + stride, ..., T}`.
///
/// A repetition whose iterate diverges is dropped and counted in
/// `meta.reps_diverged`. An evaluation whose plug-in covariance is singular
/// counts as a miss. Fails with [`Error::Invariant`] when every repetition
/// diverges.
pub fn run_coverage(cfg: &ExperimentConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let started = Instant::now();
    let grid = evaluation_grid(cfg.start, cfg.stride, cfg.iters);
    let coords = cfg.subset.resolve(cfg.model.dim())?;
    let kinds: Vec<BoundaryKind> = cfg.boundaries.iter().map(|b| b.kind).collect();
    let mut agg = Aggregator::new(grid.clone(), kinds, coords.len());
    let mut diverged = 0u64;

    let reps: Vec<u64> = (0..cfg.reps).collect();
    for chunk in reps.chunks(CHUNK) {
        let results: Vec<Result<RepCells>> =
            chunk.par_iter().map(|&r| run_rep(cfg, &grid, r)).collect();
        for res in results {
            match res {
                Ok(cells) => agg.absorb(&cells),
                Err(Error::Divergence { .. }) => diverged += 1,
                Err(e) => return Err(e),
            }
        }
    }
    if agg.reps() == 0 {
        return Err(Error::Invariant(format!(
            "all {} repetitions diverged",
            cfg.reps
        )));
    }

    let report = CoverageReport {
        rows: agg.rows(),
        meta: ReportMeta {
            experiment: "coverage".into(),
            config: serde_json::to_value(cfg).expect("config serializes"),
            seed: cfg.seed,
            streams: "repetition r uses ChaCha8 stream r of the seed".into(),
            reps_requested: cfg.reps,
            reps_diverged: diverged,
            unavailable: agg.unavailable(),
            wall_time_secs: started.elapsed().as_secs_f64(),
        },
    };
    report.check_invariants()?;
    Ok(report)
}

fn run_rep(cfg: &ExperimentConfig, grid: &[u64], rep: u64) -> Result<RepCells> {
    let mut rng = RngStream::new(cfg.seed, rep);
    let mut state = SaState::new(&vec![0.0; cfg.model.dim()]);
    let mut cells = Vec::with_capacity(grid.len());
    for &t in grid {
        while state.t() < t {
            state.step(&cfg.schedule, &cfg.model, &mut rng)?;
        }
        let deviation: Vec<f64> = state
            .xbar()
            .iter()
            .zip(&cfg.model.theta_star)
            .map(|(a, b)| a - b)
            .collect();
        let whitener = state
            .estimate()?
            .sandwich
            .map(|v| Whitener::new(&v, &cfg.subset))
            .transpose()
            .or_else(unavailable)?;
        let row = cfg
            .boundaries
            .iter()
            .map(|spec| match &whitener {
                Some(w) => {
                    let e = w.evaluate(spec, t, Some(&deviation))?;
                    Ok(Cell {
                        radius: e.radius,
                        halfwidths: e.halfwidths,
                        covered: e.covered,
                    })
                }
                None => Ok(Cell {
                    radius: f64::NAN,
                    halfwidths: Vec::new(),
                    covered: None,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        cells.push(row);
    }
    Ok(cells)
}

/// Maps "covariance cannot be whitened" to an unavailable region.
pub(super) fn unavailable<W>(e: Error) -> Result<Option<W>> {
    match e {
        Error::Singular { .. } | Error::NoConvergence { .. } => Ok(None),
        other => Err(other),
    }
}
