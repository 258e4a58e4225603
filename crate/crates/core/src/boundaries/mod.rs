//! Time-uniform confidence sequences for the averaged iterate.
//!
//! Each boundary bounds a whitened statistic `||V^{-1/2} (xbar_t - x*)||`:
//!
//! | kind        | norm | radius                                                       |
//! |-------------|------|--------------------------------------------------------------|
//! | `LilUb`     | sup  | `1.7 sqrt((loglog(2t) + 0.72 log(10.4 d / alpha)) / t)`       |
//! | `Gm`        | two  | `sqrt((1 + t0/(t l)) (d log(1 + t l/t0) + 2 log(1/alpha)) / t)` |
//! | `LilEn`     | two  | `2/(1-eps) sqrt((1.4 loglog(2 t kappa) + L) / t)`             |
//! | `FixedTime` | sup  | `z_{1-alpha/2} / sqrt(t)` per coordinate, not time-uniform   |
//!
//! where `l = lambda*` minimizes the Gaussian-mixture region volume at `t0`
//! and `L = log(5.2 C_d / alpha) + (d-1) log(3 sqrt(kappa) / eps)`.

mod evaluate;
mod mixture;
mod radii;

use serde::{Deserialize, Serialize};

pub use evaluate::{evaluate, CsEvaluation, Whitener};
pub use mixture::{
    gm_log_mixture_martingale, gm_mixture_martingale, gm_volume_objective, lambda_star,
    lambda_star_for_dim,
};
pub use radii::{radius_fixed, radius_gm, radius_lil_en, radius_lil_ub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryKind {
    #[serde(rename = "lilub")]
    LilUb,
    #[serde(rename = "gm")]
    Gm,
    #[serde(rename = "lilen")]
    LilEn,
    #[serde(rename = "fixed")]
    FixedTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "sup_norm")]
    Sup,
    #[serde(rename = "two_norm")]
    Two,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 4] = [
        BoundaryKind::LilUb,
        BoundaryKind::Gm,
        BoundaryKind::LilEn,
        BoundaryKind::FixedTime,
    ];

    /// Norm of the whitened statistic this boundary controls.
    pub fn norm(self) -> NormKind {
        match self {
            BoundaryKind::LilUb | BoundaryKind::FixedTime => NormKind::Sup,
            BoundaryKind::Gm | BoundaryKind::LilEn => NormKind::Two,
        }
    }

    pub fn is_time_uniform(self) -> bool {
        !matches!(self, BoundaryKind::FixedTime)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::LilUb => "lilub",
            BoundaryKind::Gm => "gm",
            BoundaryKind::LilEn => "lilen",
            BoundaryKind::FixedTime => "fixed",
        }
    }
}

impl std::fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundaryKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown boundary {s:?}")))
    }
}

/// A boundary choice with its parameters. `t0` is only read by `Gm` and
/// `eps_net` only by `LilEn`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec<T> {
    pub kind: BoundaryKind,
    pub alpha: T,
    pub t0: T,
    pub eps_net: T,
}

pub const DEFAULT_T0: f64 = 100.0;
pub const DEFAULT_EPS_NET: f64 = 0.5;

impl<T: Scalar> BoundarySpec<T> {
    pub fn new(kind: BoundaryKind, alpha: T, t0: T, eps_net: T) -> Result<Self> {
        let spec = Self {
            kind,
            alpha,
            t0,
            eps_net,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Boundary with default `t0 = 100` and `eps_net = 0.5`.
    pub fn with_defaults(kind: BoundaryKind, alpha: T) -> Result<Self> {
        Self::new(kind, alpha, T::lit(DEFAULT_T0), T::lit(DEFAULT_EPS_NET))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero() && self.alpha < T::one()) {
            return Err(Error::config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.t0 >= T::one()) || !self.t0.is_finite() {
            return Err(Error::config(format!("t0 must be >= 1, got {}", self.t0)));
        }
        if !(self.eps_net > T::zero() && self.eps_net < T::one()) {
            return Err(Error::config(format!(
                "eps_net must lie in (0, 1), got {}",
                self.eps_net
            )));
        }
        Ok(())
    }

    /// Radius at time `t` for a `d`-dimensional statistic whose covariance
    /// has condition number `kappa` (only `LilEn` reads it).
    pub fn radius(&self, t: T, d: usize, kappa: T) -> Result<T> {
        match self.kind {
            BoundaryKind::LilUb => radius_lil_ub(t, d, self.alpha),
            BoundaryKind::Gm => radius_gm(t, d, self.alpha, self.t0),
            BoundaryKind::LilEn => radius_lil_en(t, d, self.alpha, self.eps_net, kappa),
            BoundaryKind::FixedTime => radius_fixed(t, self.alpha),
        }
    }
}

/// Coordinates the confidence sequence is about.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subset {
    #[default]
    All,
    Coords(Vec<usize>),
}

impl Subset {
    pub fn resolve(&self, dim: usize) -> Result<Vec<usize>> {
        match self {
            Subset::All => Ok((0..dim).collect()),
            Subset::Coords(c) => {
                if c.is_empty() {
                    return Err(Error::config("coordinate subset must be nonempty"));
                }
                if let Some(&bad) = c.iter().find(|&&i| i >= dim) {
                    return Err(Error::config(format!(
                        "coordinate {bad} out of range for dimension {dim}"
                    )));
                }
                let mut seen = c.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != c.len() {
                    return Err(Error::config("coordinate subset has duplicates"));
                }
                Ok(c.clone())
            }
        }
    }
}

impl std::str::FromStr for Subset {
    type Err = Error;

    /// `all` or a comma-separated list of zero-based coordinates.
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(Subset::All);
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::config(format!("bad coordinate {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Subset::Coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_pairing() {
        assert_eq!(BoundaryKind::LilUb.norm(), NormKind::Sup);
        assert_eq!(BoundaryKind::Gm.norm(), NormKind::Two);
        assert_eq!(BoundaryKind::LilEn.norm(), NormKind::Two);
        assert!(!BoundaryKind::FixedTime.is_time_uniform());
    }

    #[test]
    fn kind_round_trips_through_str() {
        for k in BoundaryKind::ALL {
            assert_eq!(k.as_str().parse::<BoundaryKind>().unwrap(), k);
        }
        assert!("nope".parse::<BoundaryKind>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(BoundarySpec::with_defaults(BoundaryKind::Gm, 0.05).is_ok());
        assert!(BoundarySpec::with_defaults(BoundaryKind::Gm, 1.0).is_err());
        assert!(BoundarySpec::with_defaults(BoundaryKind::Gm, 0.0).is_err());
        assert!(BoundarySpec::new(BoundaryKind::Gm, 0.05, 0.5, 0.5).is_err());
        assert!(BoundarySpec::new(BoundaryKind::LilEn, 0.05, 100.0, 1.0).is_err());
    }

    #[test]
    fn subset_parsing() {
        assert_eq!("all".parse::<Subset>().unwrap(), Subset::All);
        assert_eq!("0,2".parse::<Subset>().unwrap(), Subset::Coords(vec![0, 2]));
        assert!("0,x".parse::<Subset>().is_err());
        assert!(Subset::Coords(vec![3]).resolve(3).is_err());
        assert!(Subset::Coords(vec![1, 1]).resolve(3).is_err());
        assert_eq!(Subset::All.resolve(2).unwrap(), vec![0, 1]);
    }
}
