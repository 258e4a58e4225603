use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;

/// Relative asymmetry tolerated in a covariance file before it is rejected.
const SYMMETRY_TOL: f64 = 1e-12;

/// Reads a covariance file: the first line holds `d`, followed by `d` lines
/// of `d` whitespace-separated reals.
pub fn read_covariance(path: &Path) -> Result<SymMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_covariance(&text)
}

pub fn parse_covariance(text: &str) -> Result<SymMatrix<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::config("covariance file is empty"))?;
    let d: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("bad dimension line {header:?}")))?;
    if d == 0 {
        return Err(Error::config("covariance dimension must be >= 1"));
    }
    let rows = lines
        .map(|l| {
            l.split_whitespace()
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::config(format!("bad covariance entry {v:?}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != d {
        return Err(Error::config(format!(
            "covariance file declares d={d} but has {} rows",
            rows.len()
        )));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::config(format!(
            "covariance row has {} entries, expected {d}",
            r.len()
        )));
    }
    let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..d {
        for j in 0..i {
            if (rows[i][j] - rows[j][i]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::config(format!(
                    "covariance is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    SymMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_by_two() {
        let m = parse_covariance("2\n2 1\n1 2\n").unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 1), 2.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_covariance("").is_err());
        assert!(parse_covariance("2\n1 0\n").is_err());
        assert!(parse_covariance("2\n1 0\n0\n").is_err());
        assert!(parse_covariance("2\n1 0.5\n0 1\n").is_err());
        assert!(parse_covariance("1\nx\n").is_err());
        assert!(parse_covariance("0\n").is_err());
    }
}
