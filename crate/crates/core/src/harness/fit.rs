use crate::error::{Error, Result};

/// Least-squares slope of `log(error)` against `log(t)` over the points with
/// `t` in `[t_lo, t_hi]`.
pub fn fit_rate(points: &[(f64, f64)], window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, _)| *t >= lo && *t <= hi)
        .copied()
        .collect();
    if pts.len() < 3 {
        return Err(Error::domain(format!(
            "fit_rate needs at least 3 points in [{lo}, {hi}], got {}",
            pts.len()
        )));
    }
    if let Some((t, e)) = pts.iter().find(|(t, e)| !(*t > 0.0 && *e > 0.0) || !e.is_finite()) {
        return Err(Error::domain(format!(
            "fit_rate needs positive times and errors, got ({t}, {e})"
        )));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, e)| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::domain("fit_rate window has a single distinct time"));
    }
    Ok(sxy / sxx)
}
