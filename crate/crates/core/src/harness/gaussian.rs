use std::time::Instant;

use rayon::prelude::*;

use super::config::{evaluation_grid, GaussianConfig};
use super::coverage::{Aggregator, Cell, RepCells};
use super::report::{CoverageReport, ReportMeta};
use crate::boundaries::{BoundaryKind, Subset, Whitener};
use crate::error::{Error, Result};
use crate::numerics::{sqrt_pd, SymMatrix};
use crate::sa::RngStream;

const CHUNK: usize = 64;

/// Coverage of each boundary around the sample mean `M_t = (1/t) sum G_j` of
/// i.i.d. `G_j ~ N(0, cov)`, whitened with the true `cov` from `t = 1`.
pub fn run_gaussian_check(cfg: &GaussianConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let started = Instant::now();
    let whitener = Whitener::new(&cfg.cov, &Subset::All)?;
    let root = sqrt_pd(&cfg.cov)?;
    let grid = evaluation_grid(1, cfg.stride, cfg.horizon);

    // Radii only depend on t, so they are shared by all repetitions.
    let radii: Vec<Vec<f64>> = grid
        .iter()
        .map(|&t| {
            cfg.boundaries
                .iter()
                .map(|b| Ok(cfg.radius_scale * b.radius(t as f64, whitener.dim(), whitener.kappa())?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let kinds: Vec<BoundaryKind> = cfg.boundaries.iter().map(|b| b.kind).collect();
    let mut agg = Aggregator::new(grid.clone(), kinds.clone(), whitener.dim());
    let reps: Vec<u64> = (0..cfg.reps).collect();
    for chunk in reps.chunks(CHUNK) {
        let results: Vec<Result<RepCells>> = chunk
            .par_iter()
            .map(|&r| {
                let mut rng = RngStream::new(cfg.seed, r);
                let mut cells = Vec::with_capacity(grid.len());
                simulate_mean(&root, cfg.horizon, &grid, &mut rng, |g, mean| {
                    let row = kinds
                        .iter()
                        .zip(&radii[g])
                        .map(|(&kind, &radius)| {
                            let stat = whitener.statistic(kind, mean)?;
                            Ok(Cell {
                                radius,
                                halfwidths: whitener.halfwidths(kind, radius),
                                covered: Some(stat <= radius),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    cells.push(row);
                    Ok(())
                })?;
                Ok(cells)
            })
            .collect();
        for res in results {
            agg.absorb(&res?);
        }
    }

    let report = CoverageReport {
        rows: agg.rows(),
        meta: ReportMeta {
            experiment: "gaussian-check".into(),
            config: serde_json::to_value(cfg).expect("config serializes"),
            seed: cfg.seed,
            streams: "repetition r uses ChaCha8 stream r of the seed".into(),
            reps_requested: cfg.reps,
            reps_diverged: 0,
            unavailable: agg.unavailable(),
            wall_time_secs: started.elapsed().as_secs_f64(),
        },
    };
    report.check_invariants()?;
    Ok(report)
}

/// `M_horizon` for every repetition, drawn from the same streams as
/// [`run_gaussian_check`].
pub fn gaussian_endpoints(cfg: &GaussianConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let root = sqrt_pd(&cfg.cov)?;
    (0..cfg.reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = RngStream::new(cfg.seed, r);
            let mut out = Vec::new();
            simulate_mean(&root, cfg.horizon, &[cfg.horizon], &mut rng, |_, m| {
                out = m.to_vec();
                Ok(())
            })?;
            Ok(out)
        })
        .collect()
}

/// Draws `G_j = root z_j` for `j = 1..=horizon` and calls `visit(g, M_t)` at
/// each grid time `grid[g]`.
fn simulate_mean(
    root: &SymMatrix<f64>,
    horizon: u64,
    grid: &[u64],
    rng: &mut RngStream,
    mut visit: impl FnMut(usize, &[f64]) -> Result<()>,
) -> Result<()> {
    let d = root.dim();
    let mut sum = vec![0.0; d];
    let mut z = vec![0.0; d];
    let mut mean = vec![0.0; d];
    let mut next = 0;
    for t in 1..=horizon {
        for zi in z.iter_mut() {
            *zi = rng.standard_normal();
        }
        let g = root.mul_vec(&z)?;
        for (s, gi) in sum.iter_mut().zip(&g) {
            *s += gi;
        }
        if next < grid.len() && grid[next] == t {
            let inv = 1.0 / t as f64;
            for (m, s) in mean.iter_mut().zip(&sum) {
                *m = s * inv;
            }
            visit(next, &mean)?;
            next += 1;
        }
    }
    if next != grid.len() {
        return Err(Error::Invariant("evaluation grid exceeds horizon".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundaries::BoundarySpec;

    fn all(alpha: f64) -> Vec<BoundarySpec<f64>> {
        BoundaryKind::ALL
            .into_iter()
            .map(|k| BoundarySpec::with_defaults(k, alpha).unwrap())
            .collect()
    }

    #[test]
    fn inflated_radius_always_covers() {
        let mut cfg = GaussianConfig::new(SymMatrix::identity(2), 500, 100, all(0.05), 3);
        cfg.radius_scale = 10.0;
        let report = run_gaussian_check(&cfg).unwrap();
        for k in BoundaryKind::ALL {
            assert_eq!(report.final_row(k).unwrap().uniform_coverage, 1.0, "{k}");
        }
    }

    #[test]
    fn endpoints_match_report_streams() {
        let cfg = GaussianConfig::new(SymMatrix::identity(1), 50, 3, all(0.05), 9);
        let ends = gaussian_endpoints(&cfg).unwrap();
        assert_eq!(ends.len(), 3);
        let report = run_gaussian_check(&cfg).unwrap();
        let fixed = report.final_row(BoundaryKind::FixedTime).unwrap();
        let r = fixed.radius_mean;
        let hits = ends.iter().filter(|m| m[0].abs() <= r).count() as f64 / 3.0;
        assert_eq!(hits, fixed.fixed_coverage);
    }

    #[test]
    fn first_row_is_t_one() {
        let cfg = GaussianConfig::new(SymMatrix::identity(1), 20, 2, all(0.1), 0);
        let report = run_gaussian_check(&cfg).unwrap();
        assert_eq!(report.rows[0].t, 1);
        assert_eq!(report.rows.len(), 20 * 4);
    }
}
