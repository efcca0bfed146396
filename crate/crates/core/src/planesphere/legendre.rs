//! Angular functions of the translation integrals for x = κ/K ≥ 1, where all
//! associated Legendre functions are positive and grow with ℓ. Everything is
//! returned as logarithms.

/// ln n! for n = 0..len.
pub(crate) fn ln_factorials(len: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(len + 1);
    let mut acc = 0.0;
    v.push(0.0);
    for k in 1..=len {
        acc += (k as f64).ln();
        v.push(acc);
    }
    v
}

#[inline]
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln P̄_ℓ^m(x) for ℓ = m..=lmax, with P̄ = √((ℓ−m)!/(ℓ+m)!)·(x²−1)^{m/2} dᵐP_ℓ/dxᵐ.
fn ln_normalized(m: usize, lmax: usize, x: f64, ln_s: f64, out: &mut Vec<f64>) {
    out.clear();
    if m > lmax {
        return;
    }
    let mut start = m as f64 * ln_s;
    for k in 1..=m {
        let k = k as f64;
        start += 0.5 * ((2.0 * k - 1.0) / (2.0 * k)).ln();
    }
    out.push(start);
    let mf = m as f64;
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    let mut scale = start;
    for l in m..lmax {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * x * cur - ((lf + mf) * (lf - mf)).sqrt() * prev)
            / ((lf + 1.0 + mf) * (lf + 1.0 - mf)).sqrt();
        prev = cur;
        cur = next;
        if cur > 1e150 {
            prev /= cur;
            scale += cur.ln();
            cur = 1.0;
        }
        out.push(cur.ln() + scale);
    }
}

/// Scratch buffers for [`AngularLogs::fill`].
#[derive(Debug, Default)]
pub struct AngularLogs {
    /// ln(nrm·π̃_ℓm), ℓ = max(m,1)..=lmax; −∞ for m = 0.
    pub ln_pi: Vec<f64>,
    /// ln(nrm·τ̃_ℓm), same index range.
    pub ln_tau: Vec<f64>,
    pm: Vec<f64>,
    pm1: Vec<f64>,
}

impl AngularLogs {
    /// Fills both tables at x = 1 + `xm1`.
    pub fn fill(&mut self, m: usize, lmax: usize, xm1: f64) {
        let x = 1.0 + xm1;
        let ln_s = 0.5 * (xm1 * (x + 1.0)).ln();
        ln_normalized(m, lmax, x, ln_s, &mut self.pm);
        ln_normalized(m + 1, lmax, x, ln_s, &mut self.pm1);
        self.ln_pi.clear();
        self.ln_tau.clear();
        let lmin = m.max(1);
        let ln_x = x.ln();
        let mf = m as f64;
        for l in lmin..=lmax {
            let lf = l as f64;
            let g = 0.5 * ((2.0 * lf + 1.0) / (lf * (lf + 1.0))).ln();
            let pm = self.pm[l - m];
            let lpi = if m == 0 { f64::NEG_INFINITY } else { mf.ln() + g + pm - ln_s };
            let t2 = if l > m {
                g + 0.5 * ((lf - mf) * (lf + mf + 1.0)).ln() + self.pm1[l - m - 1]
            } else {
                f64::NEG_INFINITY
            };
            self.ln_pi.push(lpi);
            self.ln_tau.push(log_add_exp(ln_x + lpi, t2));
        }
    }
}
