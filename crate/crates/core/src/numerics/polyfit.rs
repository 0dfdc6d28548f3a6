use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{NumericsError, Result};

/// Least-squares quartic `α0 + α1 x + … + α4 x⁴` over `domain`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyFit {
    pub coefficients: [f64; 5],
    pub rmse: f64,
    pub domain: (f64, f64),
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Fits a quartic by SVD least squares on a column-scaled Vandermonde matrix.
pub fn fit_quartic(xs: &[f64], ys: &[f64]) -> Result<PolyFit> {
    if xs.len() != ys.len() {
        return Err(NumericsError::InvalidArgument(format!(
            "xs and ys differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(NumericsError::InvalidArgument("samples must be finite".into()));
    }
    let mut distinct = xs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 5 {
        return Err(NumericsError::RankDeficient { distinct: distinct.len() });
    }
    if xs.len() < 6 {
        return Err(NumericsError::InvalidArgument(format!("need at least 6 samples, got {}", xs.len())));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(NumericsError::InvalidArgument("xs must be strictly increasing".into()));
    }

    let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let a = DMatrix::from_fn(xs.len(), 5, |i, j| (xs[i] / scale).powi(j as i32));
    let b = DVector::from_column_slice(ys);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let sol = svd
        .solve(&b, smax * 1e-13)
        .map_err(|e| NumericsError::InvalidArgument(e.to_string()))?;

    let mut coefficients = [0.0; 5];
    for (j, c) in coefficients.iter_mut().enumerate() {
        *c = sol[j] / scale.powi(j as i32);
    }
    let mut fit = PolyFit { coefficients, rmse: 0.0, domain: (xs[0], xs[xs.len() - 1]) };
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (fit.eval(*x) - y).powi(2)).sum();
    fit.rmse = (sse / xs.len() as f64).sqrt();
    Ok(fit)
}
