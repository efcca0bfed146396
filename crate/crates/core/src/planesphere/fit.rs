//! Extraction of the linear coefficient of ρ_G(x) = 1 + β_G x + O(x²).

use crate::error::{CasimirError, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaFit {
    /// Linear coefficient β_G.
    pub beta: f64,
    /// Quadratic and cubic coefficients.
    pub higher: [f64; 2],
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// Condition number of the column-scaled design matrix.
    pub condition: f64,
}

/// Cubic least-squares fit of (x, ρ) samples with the intercept fixed at 1.
pub fn beta_g_fit(samples: &[(f64, f64)]) -> Result<BetaFit> {
    if samples.len() < 5 {
        return Err(CasimirError::Domain(format!("β_G fit needs at least 5 samples, got {}", samples.len())));
    }
    if samples.iter().any(|(x, r)| !(x.is_finite() && r.is_finite() && *x > 0.0)) {
        return Err(CasimirError::Domain("β_G samples must be finite with x > 0".into()));
    }
    let n = samples.len();
    let xmax = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    // columns (x/xmax)^k keep the scaling sane
    let a = DMatrix::from_fn(n, 3, |i, j| (samples[i].0 / xmax).powi(j as i32 + 1));
    let y = DVector::from_iterator(n, samples.iter().map(|s| s.1 - 1.0));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition < 1e8) {
        return Err(CasimirError::IllConditioned { condition });
    }
    let c = svd.solve(&y, 0.0).map_err(|e| CasimirError::Numeric(e.to_string()))?;
    let resid = (&a * &c - &y).norm() / (n as f64).sqrt();
    Ok(BetaFit {
        beta: c[0] / xmax,
        higher: [c[1] / (xmax * xmax), c[2] / xmax.powi(3)],
        residual: resid,
        condition,
    })
}
