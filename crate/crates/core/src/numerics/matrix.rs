use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense symmetric `d x d` matrix stored row-major.
///
/// Every mutator writes `(i, j)` and `(j, i)` together, so the stored entries
/// are exactly symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![T::one(); dim])
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.entries[i * m.dim + i] = v;
        }
        m
    }

    /// Builds a matrix from rows, storing `(A + A^T) / 2`.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::domain("matrix must have dimension >= 1"));
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::domain("matrix entries must be finite"));
            }
        }
        let half = T::lit(0.5);
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = if i == j {
                    rows[i][i]
                } else {
                    (rows[i][j] + rows[j][i]) * half
                };
            }
        }
        Ok(m)
    }

    /// Symmetrizes a general row-major `dim x dim` buffer.
    pub(crate) fn from_general(dim: usize, general: &[T]) -> Self {
        debug_assert_eq!(general.len(), dim * dim);
        let half = T::lit(0.5);
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = general[i * dim + i];
            for j in (i + 1)..dim {
                let v = (general[i * dim + j] + general[j * dim + i]) * half;
                m.entries[i * dim + j] = v;
                m.entries[j * dim + i] = v;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.dim + j] = v;
        self.entries[j * self.dim + i] = v;
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `self += w * v v^T`.
    pub fn add_outer(&mut self, v: &[T], w: T) {
        debug_assert_eq!(v.len(), self.dim);
        let d = self.dim;
        for i in 0..d {
            let wi = w * v[i];
            for j in i..d {
                let add = wi * v[j];
                self.entries[i * d + j] = self.entries[i * d + j] + add;
                if i != j {
                    self.entries[j * d + i] = self.entries[j * d + i] + add;
                }
            }
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_dim(v.len())?;
        Ok(self
            .entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    /// `v^T M v`.
    pub fn quad_form(&self, v: &[T]) -> Result<T> {
        let mv = self.mul_vec(v)?;
        Ok(mv.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
    }

    /// `A M B` as a general row-major buffer.
    pub(crate) fn general_product(a: &[T], m: &[T], b: &[T], d: usize) -> Vec<T> {
        let mut am = vec![T::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = a[i * d + k];
                if aik == T::zero() {
                    continue;
                }
                for j in 0..d {
                    am[i * d + j] = am[i * d + j] + aik * m[k * d + j];
                }
            }
        }
        let mut out = vec![T::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let v = am[i * d + k];
                if v == T::zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] = out[i * d + j] + v * b[k * d + j];
                }
            }
        }
        out
    }

    /// `A M A` for symmetric `A` and `M`; the result is symmetrized.
    pub fn sandwich(outer: &Self, inner: &Self) -> Result<Self> {
        outer.check_dim(inner.dim)?;
        let d = outer.dim;
        let g = Self::general_product(&outer.entries, &inner.entries, &outer.entries, d);
        Ok(Self::from_general(d, &g))
    }

    /// `A M A^T` for a general row-major `A`.
    pub fn congruence(&self, a: &[T]) -> Result<Self> {
        let d = self.dim;
        if a.len() != d * d {
            return Err(Error::Dimension {
                expected: d * d,
                got: a.len(),
            });
        }
        let mut at = vec![T::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                at[j * d + i] = a[i * d + j];
            }
        }
        let g = Self::general_product(a, &self.entries, &at, d);
        Ok(Self::from_general(d, &g))
    }

    /// Principal sub-matrix on the given coordinates, in the given order.
    pub fn submatrix(&self, coords: &[usize]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("coordinate subset must be nonempty"));
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= self.dim) {
            return Err(Error::domain(format!(
                "coordinate {bad} out of range for dimension {}",
                self.dim
            )));
        }
        let k = coords.len();
        let mut m = Self::zeros(k);
        for (a, &i) in coords.iter().enumerate() {
            for (b, &j) in coords.iter().enumerate() {
                m.entries[a * k + b] = self.get(i, j);
            }
        }
        Ok(m)
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SymMatrix<U> {
        SymMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&v| f(v)).collect(),
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_rows_symmetrizes() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0, 3.0]]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0]]).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn add_outer_accumulates() {
        let mut m = SymMatrix::<f64>::zeros(2);
        m.add_outer(&[1.0, 2.0], 1.0);
        m.add_outer(&[1.0, 0.0], 2.0);
        assert_eq!(m.rows(), vec![vec![3.0, 2.0], vec![2.0, 4.0]]);
    }

    #[test]
    fn submatrix_picks_coordinates() {
        let m = SymMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 5.0, 6.0],
            vec![3.0, 6.0, 9.0],
        ])
        .unwrap();
        let s = m.submatrix(&[2, 0]).unwrap();
        assert_eq!(s.rows(), vec![vec![9.0, 3.0], vec![3.0, 1.0]]);
        assert!(m.submatrix(&[3]).is_err());
    }

    #[test]
    fn congruence_with_diagonal() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let c = m.congruence(&[2.0, 0.0, 0.0, 3.0]).unwrap();
        assert_eq!(c.rows(), vec![vec![8.0, 6.0], vec![6.0, 18.0]]);
    }
}
