//! Streaming plug-in estimation of `H`, `S` and the sandwich `H^{-1} S H^{-1}`.
//!
//! `H_hat_t = (1/t) sum_j H(x_j, xi_{j+1})` and `S_hat_t = (1/t) sum_j G G^T`,
//! both evaluated at the pre-update iterate. At small `t` the Jacobian
//! average can be singular; the estimate is then flagged rather than
//! inverted, and downstream boundaries report "unavailable".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{sym_eig, SymMatrix};
use crate::sa::SaState;
use crate::scalar::Scalar;

/// Relative eigenvalue floor for inverting `H_hat`.
pub const INVERT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PluginEstimate<T> {
    pub t: u64,
    pub h_hat: SymMatrix<T>,
    pub s_hat: SymMatrix<T>,
    /// `H_hat^{-1} S_hat H_hat^{-1}`; absent when `singular` is set.
    pub sandwich: Option<SymMatrix<T>>,
    pub singular: bool,
}

pub fn plugin_estimate<T: Scalar>(state: &SaState<T>) -> Result<PluginEstimate<T>> {
    plugin_estimate_from_sums(state.t(), state.h_sum(), state.s_sum())
}

/// Normalizes raw accumulators and forms the sandwich when `H_hat` is
/// safely invertible.
pub fn plugin_estimate_from_sums<T: Scalar>(
    t: u64,
    h_sum: &SymMatrix<T>,
    s_sum: &SymMatrix<T>,
) -> Result<PluginEstimate<T>> {
    if t == 0 {
        return Err(Error::domain("plug-in estimate needs t >= 1"));
    }
    if h_sum.dim() != s_sum.dim() {
        return Err(Error::Dimension {
            expected: h_sum.dim(),
            got: s_sum.dim(),
        });
    }
    let inv_t = T::one() / T::from_u64(t).expect("t representable");
    let h_hat = h_sum.scaled(inv_t);
    let s_hat = s_sum.scaled(inv_t);

    let sandwich = if h_hat.is_finite() && s_hat.is_finite() {
        let eig = sym_eig(&h_hat)?;
        match eig.check_pd_with(INVERT_TOL) {
            Ok(()) => {
                let h_inv = eig.compose(|v| T::one() / v);
                Some(SymMatrix::sandwich(&h_inv, &s_hat)?)
            }
            Err(_) => None,
        }
    } else {
        None
    };
    Ok(PluginEstimate {
        t,
        singular: sandwich.is_none(),
        h_hat,
        s_hat,
        sandwich,
    })
}

/// Almost-sure convergence exponent `min(1 - 1/p_bar, a/2)` shared by
/// `H_hat` and the plug-in sandwich. `p_bar` may be infinite.
pub fn plugin_rate_exponent(p_bar: f64, a: f64) -> Result<f64> {
    if !(p_bar > 1.0) {
        return Err(Error::domain(format!("p_bar must exceed 1, got {p_bar}")));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain(format!("a must lie in (0, 1), got {a}")));
    }
    Ok((1.0 - 1.0 / p_bar).min(a / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sa::{Datum, ModelSpec, StepSchedule};
    use approx::assert_relative_eq;

    #[test]
    fn single_datum_estimate() {
        let model = ModelSpec::<f64>::linear(1);
        let schedule = StepSchedule::new(0.01, 0.67).unwrap();
        let mut st = SaState::new(&[0.0]);
        st.step_with(&schedule, &model, &Datum { x: vec![2.0], y: 1.5 }).unwrap();
        let est = plugin_estimate(&st).unwrap();
        let r = 1.5;
        assert_eq!(est.h_hat.get(0, 0), 4.0);
        assert_eq!(est.s_hat.get(0, 0), 4.0 * r * r);
        assert!(!est.singular);
        assert_relative_eq!(est.sandwich.unwrap().get(0, 0), r * r / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_jacobian_is_flagged() {
        let model = ModelSpec::<f64>::linear(1);
        let schedule = StepSchedule::new(0.01, 0.67).unwrap();
        let mut st = SaState::new(&[0.0]);
        st.step_with(&schedule, &model, &Datum { x: vec![0.0], y: 1.0 }).unwrap();
        let est = plugin_estimate(&st).unwrap();
        assert!(est.singular);
        assert!(est.sandwich.is_none());
    }

    #[test]
    fn rank_deficient_jacobian_is_flagged() {
        let mut h = SymMatrix::<f64>::zeros(2);
        h.add_outer(&[1.0, 1.0], 1.0);
        let est = plugin_estimate_from_sums(1, &h, &SymMatrix::identity(2)).unwrap();
        assert!(est.singular);
    }

    #[test]
    fn t_zero_rejected() {
        let st = SaState::<f64>::new(&[0.0]);
        assert!(plugin_estimate(&st).is_err());
    }

    #[test]
    fn sandwich_scale_equivariance() {
        let h = SymMatrix::from_rows(&[vec![3.0, 0.5], vec![0.5, 2.0]]).unwrap();
        let s = SymMatrix::from_rows(&[vec![1.0, 0.2], vec![0.2, 4.0]]).unwrap();
        let base = plugin_estimate_from_sums(7, &h, &s).unwrap();
        let base_v = base.sandwich.unwrap();
        for c in [0.1, 3.0, 250.0] {
            let est = plugin_estimate_from_sums(7, &h.scaled(c), &s.scaled(c * c)).unwrap();
            let v = est.sandwich.unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert_relative_eq!(v.get(i, j), base_v.get(i, j), max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn sandwich_is_exactly_symmetric() {
        let h = SymMatrix::from_rows(&[
            vec![3.0, 0.5, 0.1],
            vec![0.5, 2.0, -0.3],
            vec![0.1, -0.3, 1.0],
        ])
        .unwrap();
        let s = SymMatrix::from_rows(&[
            vec![1.0, 0.2, 0.0],
            vec![0.2, 4.0, 0.7],
            vec![0.0, 0.7, 2.0],
        ])
        .unwrap();
        let v = plugin_estimate_from_sums(3, &h, &s).unwrap().sandwich.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(v.get(i, j), v.get(j, i));
            }
        }
    }

    #[test]
    fn rate_exponent_values() {
        assert_eq!(plugin_rate_exponent(2.0, 0.5).unwrap(), 0.25);
        assert_eq!(plugin_rate_exponent(f64::INFINITY, 0.8).unwrap(), 0.4);
        assert_relative_eq!(plugin_rate_exponent(1.25, 0.9).unwrap(), 0.2, epsilon = 1e-15);
        assert!(plugin_rate_exponent(1.0, 0.5).is_err());
        assert!(plugin_rate_exponent(2.0, 1.0).is_err());
    }
}
