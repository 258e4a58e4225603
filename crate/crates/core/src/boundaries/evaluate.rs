use serde::{Deserialize, Serialize};

use super::{BoundaryKind, BoundarySpec, NormKind, Subset};
use crate::error::{Error, Result};
use crate::numerics::{sym_eig, SymMatrix};
use crate::scalar::Scalar;

/// One boundary evaluated at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsEvaluation<T> {
    pub t: u64,
    pub kind: BoundaryKind,
    pub radius: T,
    pub norm_kind: NormKind,
    /// Realized whitened statistic, when the deviation `xbar - x*` is known.
    pub whitened_stat: Option<T>,
    /// `whitened_stat <= radius`, when the deviation is known.
    pub covered: Option<bool>,
    /// Projection of the region onto each selected coordinate.
    pub halfwidths: Vec<T>,
}

/// Whitening data for one covariance restricted to a coordinate subset.
///
/// Built once per covariance and reused for every boundary evaluated
/// against it.
#[derive(Debug, Clone)]
pub struct Whitener<T> {
    coords: Vec<usize>,
    inv_sqrt: SymMatrix<T>,
    /// `||row_i(V^{1/2})||_1`, the sup-norm region's extent along coordinate `i`.
    sqrt_row_l1: Vec<T>,
    /// `sqrt(V_ii)`.
    sd: Vec<T>,
    kappa: T,
}

impl<T: Scalar> Whitener<T> {
    /// Fails with [`Error::Singular`] when the selected block is not
    /// positive definite.
    pub fn new(v: &SymMatrix<T>, subset: &Subset) -> Result<Self> {
        let coords = subset.resolve(v.dim())?;
        let block = v.submatrix(&coords)?;
        let eig = sym_eig(&block)?;
        eig.check_pd()?;
        let inv_sqrt = eig.compose(|x| T::one() / x.sqrt());
        let sqrt = eig.compose(|x| x.sqrt());
        let k = coords.len();
        let sqrt_row_l1 = (0..k)
            .map(|i| (0..k).fold(T::zero(), |acc, j| acc + sqrt.get(i, j).abs()))
            .collect();
        let sd = block.diag().into_iter().map(|x| x.sqrt()).collect();
        let kappa = (eig.max_value() / eig.min_value()).max(T::one());
        Ok(Self {
            coords,
            inv_sqrt,
            sqrt_row_l1,
            sd,
            kappa,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    /// `V_S^{-1/2} dev_S` for a full-length deviation vector.
    pub fn whiten(&self, deviation: &[T]) -> Result<Vec<T>> {
        let sub = self.select(deviation)?;
        self.inv_sqrt.mul_vec(&sub)
    }

    fn select(&self, deviation: &[T]) -> Result<Vec<T>> {
        if let Some(&max) = self.coords.iter().max() {
            if max >= deviation.len() {
                return Err(Error::Dimension {
                    expected: max + 1,
                    got: deviation.len(),
                });
            }
        }
        Ok(self.coords.iter().map(|&i| deviation[i]).collect())
    }

    /// Statistic controlled by `kind`: sup or two norm of the whitened
    /// deviation, or for the fixed-time baseline the largest marginal z-score.
    pub fn statistic(&self, kind: BoundaryKind, deviation: &[T]) -> Result<T> {
        if kind == BoundaryKind::FixedTime {
            let sub = self.select(deviation)?;
            return Ok(sub
                .iter()
                .zip(&self.sd)
                .fold(T::zero(), |m, (&x, &s)| m.max((x / s).abs())));
        }
        let w = self.whiten(deviation)?;
        Ok(match kind.norm() {
            NormKind::Sup => w.iter().fold(T::zero(), |m, x| m.max(x.abs())),
            NormKind::Two => w.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt(),
        })
    }

    pub fn halfwidths(&self, kind: BoundaryKind, radius: T) -> Vec<T> {
        let scale = match kind {
            BoundaryKind::LilUb => &self.sqrt_row_l1,
            _ => &self.sd,
        };
        scale.iter().map(|&s| radius * s).collect()
    }

    pub fn evaluate(
        &self,
        spec: &BoundarySpec<T>,
        t: u64,
        deviation: Option<&[T]>,
    ) -> Result<CsEvaluation<T>> {
        let tt = T::from_u64(t).ok_or_else(|| Error::domain("time not representable"))?;
        let radius = spec.radius(tt, self.dim(), self.kappa)?;
        let whitened_stat = deviation
            .map(|dev| self.statistic(spec.kind, dev))
            .transpose()?;
        Ok(CsEvaluation {
            t,
            kind: spec.kind,
            radius,
            norm_kind: spec.kind.norm(),
            whitened_stat,
            covered: whitened_stat.map(|s| s <= radius),
            halfwidths: self.halfwidths(spec.kind, radius),
        })
    }
}

/// Evaluates one boundary at time `t` for covariance estimate `v_hat`.
///
/// Inference on a subset uses the sub-vector, the principal sub-matrix and
/// `|subset|` as the dimension. A singular block yields [`Error::Singular`],
/// i.e. the region is unavailable at this `t`.
pub fn evaluate<T: Scalar>(
    spec: &BoundarySpec<T>,
    v_hat: &SymMatrix<T>,
    t: u64,
    deviation: Option<&[T]>,
    subset: &Subset,
) -> Result<CsEvaluation<T>> {
    spec.validate()?;
    Whitener::new(v_hat, subset)?.evaluate(spec, t, deviation)
}
