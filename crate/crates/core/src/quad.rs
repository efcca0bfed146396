//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite
//! intervals.

use crate::error::{CasimirError, Result};
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let err = ((kronrod - gauss) * h).abs();
    (kronrod * h, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(CasimirError::Quadrature { estimate: total_err, tolerance: tol });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision
            heap.push(worst);
            let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
            if total_err <= 1e3 * tol {
                break;
            }
            return Err(CasimirError::Quadrature { estimate: total_err, tolerance: tol });
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum in interval order so the result does not depend on heap history
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Integral { value, error, evaluations })
}

/// Integral of `f` over `[a, ∞)` using the map `x = a + scale·t/(1−t)`.
///
/// `scale` should be of the order of the decay length of the integrand.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    cfg: QuadConfig,
) -> Result<Integral> {
    integrate(
        |t: f64| {
            let one_minus = 1.0 - t;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let x = a + scale * t / one_minus;
            let jac = scale / (one_minus * one_minus);
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        },
        0.0,
        1.0,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, QuadConfig::default()).unwrap();
        assert!((r.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_tail() {
        let r = integrate_to_infinity(|x| (-x).exp(), 0.0, 1.0, QuadConfig::rel(1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn peaked_integrand() {
        // ∫ 1/(1+100x²) over [-1,1] = 2 atan(10)/10
        let r = integrate(|x| 1.0 / (1.0 + 100.0 * x * x), -1.0, 1.0, QuadConfig::rel(1e-12)).unwrap();
        let exact = 2.0 * 10f64.atan() / 10.0;
        assert!((r.value - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn log_singularity_at_endpoint() {
        // ∫_0^1 ln x dx = −1
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, QuadConfig::rel(1e-10)).unwrap();
        assert!((r.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_error() {
        let cfg = QuadConfig { rel_tol: 1e-15, abs_tol: 0.0, max_intervals: 2 };
        let r = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, cfg);
        assert!(matches!(r, Err(CasimirError::Quadrature { .. })));
    }
}

/// Result of [`integrate_to_infinity_vec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecIntegral<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evaluations: usize,
}

struct VecPanel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
}

fn gk15_points(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut p = [c; 15];
    for j in 0..7 {
        p[2 * j] = c - h * XGK[j];
        p[2 * j + 1] = c + h * XGK[j];
    }
    p
}

fn gk15_combine<const N: usize>(a: f64, b: f64, fx: &[[f64; N]]) -> ([f64; N], [f64; N]) {
    let h = 0.5 * (b - a);
    let mut val = [0.0; N];
    let mut err = [0.0; N];
    for c in 0..N {
        let mut kronrod = fx[14][c] * WGK[7];
        let mut gauss = fx[14][c] * WG[3];
        for j in 0..7 {
            let s = fx[2 * j][c] + fx[2 * j + 1][c];
            kronrod += WGK[j] * s;
            if j % 2 == 1 {
                gauss += WG[j / 2] * s;
            }
        }
        val[c] = kronrod * h;
        err[c] = ((kronrod - gauss) * h).abs();
    }
    (val, err)
}

/// Adaptive integral of a vector-valued `f` over `[a, ∞)` (map
/// `x = a + scale·t/(1−t)`). Every component must meet the tolerance. The
/// nodes of each refinement step are evaluated in parallel and combined in
/// a fixed order.
pub fn integrate_to_infinity_vec<const N: usize, F>(f: F, a: f64, scale: f64, cfg: QuadConfig) -> Result<VecIntegral<N>>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    use rayon::prelude::*;
    let g = |t: f64| -> Result<[f64; N]> {
        let one_minus = 1.0 - t;
        if one_minus <= 0.0 {
            return Ok([0.0; N]);
        }
        let jac = scale / (one_minus * one_minus);
        let mut v = f(a + scale * t / one_minus)?;
        for x in v.iter_mut() {
            if *x != 0.0 {
                *x *= jac;
            }
        }
        Ok(v)
    };
    let eval = |intervals: &[(f64, f64)]| -> Result<Vec<VecPanel<N>>> {
        let pts: Vec<f64> = intervals.iter().flat_map(|&(a, b)| gk15_points(a, b)).collect();
        let vals: Vec<Result<[f64; N]>> = pts.par_iter().map(|&t| g(t)).collect();
        let vals: Vec<[f64; N]> = vals.into_iter().collect::<Result<_>>()?;
        Ok(intervals
            .iter()
            .zip(vals.chunks(15))
            .map(|(&(a, b), fx)| {
                let (value, error) = gk15_combine(a, b, fx);
                VecPanel { a, b, value, error }
            })
            .collect())
    };
    let mut panels = eval(&[(0.0, 1.0)])?;
    let mut evaluations = 15;
    loop {
        let mut total = [0.0; N];
        let mut total_err = [0.0; N];
        for p in &panels {
            for c in 0..N {
                total[c] += p.value[c];
                total_err[c] += p.error[c];
            }
        }
        let tol: Vec<f64> = total.iter().map(|v| cfg.abs_tol.max(cfg.rel_tol * v.abs())).collect();
        if (0..N).all(|c| total_err[c] <= tol[c]) {
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            let mut value = [0.0; N];
            let mut error = [0.0; N];
            for p in &panels {
                for c in 0..N {
                    value[c] += p.value[c];
                    error[c] += p.error[c];
                }
            }
            return Ok(VecIntegral { value, error, evaluations });
        }
        if panels.len() >= cfg.max_intervals {
            let c = (0..N).max_by(|&i, &j| (total_err[i] / tol[i]).total_cmp(&(total_err[j] / tol[j]))).unwrap_or(0);
            return Err(CasimirError::Quadrature { estimate: total_err[c], tolerance: tol[c] });
        }
        // split the panel with the largest normalized error
        let score = |p: &VecPanel<N>| -> f64 {
            (0..N).map(|c| if tol[c] > 0.0 { p.error[c] / tol[c] } else { p.error[c] }).fold(0.0, f64::max)
        };
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| score(x.1).total_cmp(&score(y.1)))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(CasimirError::Quadrature { estimate: p.error[0], tolerance: tol[0] });
        }
        panels.extend(eval(&[(p.a, mid), (mid, p.b)])?);
        evaluations += 30;
    }
}
