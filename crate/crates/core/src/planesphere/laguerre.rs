//! Gauss–Laguerre nodes with log-domain weights, so that rules with several
//! hundred nodes stay usable even though most weights underflow.

use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

/// Laguerre L_n(t) and L_{n−1}(t) as (mantissa_n, mantissa_{n−1}, ln scale).
fn laguerre_pair(n: usize, t: f64) -> (f64, f64, f64) {
    let (mut p0, mut p1) = (1.0f64, 1.0 - t);
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    let mut scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 - t) * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
        let a = p1.abs();
        if a > 1e150 {
            p0 /= a;
            p1 /= a;
            scale += a.ln();
        }
    }
    (p1, p0, scale)
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Laguerre rule needs at least one node");
        // Golub–Welsch for starting values
        let mut j = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            j[(i, i)] = 2.0 * i as f64 + 1.0;
            if i + 1 < n {
                j[(i, i + 1)] = (i + 1) as f64;
                j[(i + 1, i)] = (i + 1) as f64;
            }
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let nf = n as f64;
        let mut ln_weights = Vec::with_capacity(n);
        for t in nodes.iter_mut() {
            for _ in 0..8 {
                let (ln_, lm1, _) = laguerre_pair(n, *t);
                // t L_n' = n (L_n − L_{n−1})
                let step = *t * ln_ / (nf * (ln_ - lm1));
                *t -= step;
                if step.abs() <= 1e-15 * t.abs() {
                    break;
                }
            }
            let (p, _, sc) = laguerre_pair(n + 1, *t);
            ln_weights.push(t.ln() - 2.0 * (nf + 1.0).ln() - 2.0 * (p.abs().ln() + sc));
        }
        Self { nodes, ln_weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        for &n in &[5usize, 40, 300] {
            let g = GaussLaguerre::new(n);
            // ∫ t^k e^{−t} dt = k!
            let mut fact = 1.0;
            for k in 0..8 {
                if k > 0 {
                    fact *= k as f64;
                }
                let s: f64 = g.nodes.iter().zip(&g.ln_weights).map(|(t, lw)| (lw + k as f64 * t.ln()).exp()).sum();
                assert!((s / fact - 1.0).abs() < 1e-10, "n={n} k={k} {s}");
            }
        }
    }

    #[test]
    fn high_degree_polynomial_in_log_space() {
        // ∫ t^199 e^{−t} = 199!, which overflows; compare logarithms.
        let g = GaussLaguerre::new(120);
        let terms: Vec<f64> = g.nodes.iter().zip(&g.ln_weights).map(|(t, lw)| lw + 199.0 * t.ln()).collect();
        let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ln_s = mx + terms.iter().map(|v| (v - mx).exp()).sum::<f64>().ln();
        let ln_fact: f64 = (1..200).map(|k| (k as f64).ln()).sum();
        assert!((ln_s - ln_fact).abs() < 1e-11);
    }
}
