//! Round-trip operator sphere → plate → sphere in the spherical-wave basis,
//! one azimuthal number m at a time.
//!
//! Elements are integrals over x = κ/K ∈ [1, ∞) with weight e^{−2K𝓛x},
//! evaluated with one Gauss–Laguerre rule in t = 2K𝓛(x−1). The matrix is
//! symmetrized by the similarity diag(√|T_ℓ|), and every per-node factor is
//! assembled in log space so that K → 0 and large ℓ stay finite.

use super::laguerre::GaussLaguerre;
use super::legendre::{ln_factorials, AngularLogs};
use super::mie::{mie_logs, static_mie_logs, MieLogs};
use crate::error::{CasimirError, Result};
use crate::materials::DielectricModel;
use crate::specular::FrozenMirror;
use crate::units::HBAR_C;
use nalgebra::DMatrix;

/// Frequency-dependent data shared by all m-blocks at one ξ.
pub(crate) struct FrequencyData {
    lmax: usize,
    /// `None` at ξ = 0.
    k: Option<f64>,
    /// ½ ln w_j plus the node-dependent part of the prefactor.
    base: Vec<f64>,
    /// x_j − 1 (dynamic) or t_j (static).
    var: Vec<f64>,
    kappa: Vec<f64>,
    r_te: Vec<f64>,
    r_tm: Vec<f64>,
    mie: MieLogs,
    radius: f64,
    ln_fact: Vec<f64>,
}

impl FrequencyData {
    pub(crate) fn new(
        xi: f64,
        lmax: usize,
        big_l: f64,
        radius: f64,
        sphere: &DielectricModel,
        plate: &DielectricModel,
        rule: &GaussLaguerre,
    ) -> Result<Self> {
        let mirror = FrozenMirror::new(plate, xi)?;
        let n = rule.len();
        let mut fd = FrequencyData {
            lmax,
            k: None,
            base: Vec::with_capacity(n),
            var: Vec::with_capacity(n),
            kappa: Vec::with_capacity(n),
            r_te: Vec::with_capacity(n),
            r_tm: Vec::with_capacity(n),
            mie: MieLogs::default(),
            radius,
            ln_fact: Vec::new(),
        };
        if xi == 0.0 {
            fd.mie = static_mie_logs(lmax, radius, sphere)?;
            fd.ln_fact = ln_factorials(2 * lmax + 2);
            let half_ln_2l = 0.5 * (2.0 * big_l).ln();
            for (t, lw) in rule.nodes.iter().zip(&rule.ln_weights) {
                let kz = t / (2.0 * big_l);
                let r = mirror.at_kappa(kz);
                fd.base.push(0.5 * lw - half_ln_2l);
                fd.var.push(*t);
                fd.kappa.push(kz);
                fd.r_te.push(r.te);
                fd.r_tm.push(r.tm);
            }
        } else {
            let k = xi / HBAR_C;
            let eps = match sphere {
                DielectricModel::PerfectMirror => f64::INFINITY,
                m => m.eval_epsilon(xi)?,
            };
            fd.mie = mie_logs(lmax, k * radius, eps)?;
            fd.k = Some(k);
            let two_kl = 2.0 * k * big_l;
            let ln_pref = -two_kl - two_kl.ln();
            for (t, lw) in rule.nodes.iter().zip(&rule.ln_weights) {
                let xm1 = t / two_kl;
                let kz = k * (1.0 + xm1);
                let r = mirror.at_kappa(kz);
                fd.base.push(0.5 * (lw + ln_pref));
                fd.var.push(xm1);
                fd.kappa.push(kz);
                fd.r_te.push(r.te);
                fd.r_tm.push(r.tm);
            }
        }
        Ok(fd)
    }

    /// True when the sphere or the plate does not scatter at this frequency.
    pub(crate) fn is_trivial(&self) -> bool {
        let sphere_dark = self.mie.ln_a.iter().chain(&self.mie.ln_b).all(|v| *v == f64::NEG_INFINITY);
        let plate_dark = self.r_te.iter().chain(&self.r_tm).all(|v| *v == 0.0);
        sphere_dark || plate_dark
    }
}

/// Symmetrized round-trip matrix M and, on request, ∂M/∂𝓛 and ∂²M/∂𝓛².
pub(crate) struct RoundTrip {
    pub m0: DMatrix<f64>,
    pub m1: Option<DMatrix<f64>>,
    pub m2: Option<DMatrix<f64>>,
}

/// aᵀ·diag(d)·b
fn weighted(a: &DMatrix<f64>, d: &[f64], b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut db = b.clone();
    for (j, dj) in d.iter().enumerate() {
        db.row_mut(j).scale_mut(*dj);
    }
    a.tr_mul(&db)
}

pub(crate) fn round_trip(fd: &FrequencyData, m: usize, derivatives: bool) -> RoundTrip {
    let lmin = m.max(1);
    let n = fd.lmax + 1 - lmin;
    let nodes = fd.base.len();
    let dim = 2 * n;
    let mut tau_e = DMatrix::<f64>::zeros(nodes, n);
    let mut tau_m = DMatrix::<f64>::zeros(nodes, n);
    let mut pi_e = DMatrix::<f64>::zeros(nodes, n);
    let mut pi_m = DMatrix::<f64>::zeros(nodes, n);
    let half_a: Vec<f64> = (lmin..=fd.lmax).map(|l| 0.5 * fd.mie.ln_a[l - 1]).collect();
    let half_b: Vec<f64> = (lmin..=fd.lmax).map(|l| 0.5 * fd.mie.ln_b[l - 1]).collect();
    let dynamic = fd.k.is_some();
    let mut ang = AngularLogs::default();
    let static_ang: Vec<f64> = if dynamic {
        Vec::new()
    } else {
        // ln(nrm_ℓm·ℓ·c_ℓm) + (ℓ+½) ln R, with c_ℓm the leading coefficient of
        // dᵐP_ℓ/dxᵐ; only τ̃ survives at ξ = 0
        let lf = &fd.ln_fact;
        (lmin..=fd.lmax)
            .map(|l| {
                let l_f = l as f64;
                let ln_nrm = 0.5 * (((2.0 * l_f + 1.0) / (l_f * (l_f + 1.0))).ln() + lf[l - m] - lf[l + m]);
                let ln_c = lf[2 * l] - l_f * 2f64.ln() - lf[l] - lf[l - m];
                ln_nrm + l_f.ln() + ln_c + (l_f + 0.5) * fd.radius.ln()
            })
            .collect()
    };
    for j in 0..nodes {
        if dynamic {
            ang.fill(m, fd.lmax, fd.var[j]);
        }
        let ln_kz = fd.kappa[j].ln();
        for i in 0..n {
            let l = lmin + i;
            let (lt, lp) = if dynamic {
                (ang.ln_tau[i], ang.ln_pi[i])
            } else {
                (static_ang[i] + l as f64 * ln_kz, f64::NEG_INFINITY)
            };
            let b = fd.base[j];
            tau_e[(j, i)] = (b + half_a[i] + lt).exp();
            tau_m[(j, i)] = (b + half_b[i] + lt).exp();
            pi_e[(j, i)] = (b + half_a[i] + lp).exp();
            pi_m[(j, i)] = (b + half_b[i] + lp).exp();
        }
    }
    let sign: Vec<f64> = (lmin..=fd.lmax)
        .map(|l| fd.mie.sign_a[l - 1])
        .chain((lmin..=fd.lmax).map(|l| fd.mie.sign_b[l - 1]))
        .collect();
    let assemble = |te: &[f64], tm: &[f64]| -> DMatrix<f64> {
        let mut out = DMatrix::<f64>::zeros(dim, dim);
        let ee = weighted(&tau_e, tm, &tau_e) - weighted(&pi_e, te, &pi_e);
        let mm = weighted(&tau_m, te, &tau_m) - weighted(&pi_m, tm, &pi_m);
        out.view_mut((0, 0), (n, n)).copy_from(&ee);
        out.view_mut((n, n), (n, n)).copy_from(&mm);
        if m > 0 {
            let em = weighted(&tau_e, tm, &pi_m) - weighted(&pi_e, te, &tau_m);
            let me = weighted(&tau_m, te, &pi_e) - weighted(&pi_m, tm, &tau_e);
            out.view_mut((0, n), (n, n)).copy_from(&em);
            out.view_mut((n, 0), (n, n)).copy_from(&me);
        }
        for (r, s) in sign.iter().enumerate() {
            if *s < 0.0 {
                out.row_mut(r).neg_mut();
            }
        }
        out
    };
    let m0 = assemble(&fd.r_te, &fd.r_tm);
    if !derivatives {
        return RoundTrip { m0, m1: None, m2: None };
    }
    let scaled = |r: &[f64], f: &dyn Fn(f64) -> f64| -> Vec<f64> {
        r.iter().zip(&fd.kappa).map(|(v, k)| v * f(*k)).collect()
    };
    let d1 = |k: f64| -2.0 * k;
    let d2 = |k: f64| 4.0 * k * k;
    let m1 = assemble(&scaled(&fd.r_te, &d1), &scaled(&fd.r_tm, &d1));
    let m2 = assemble(&scaled(&fd.r_te, &d2), &scaled(&fd.r_tm, &d2));
    RoundTrip { m0, m1: Some(m1), m2: Some(m2) }
}

/// ln det(1 − M), Tr[(1−M)⁻¹M′] and Tr[(1−M)⁻¹M″] + Tr[((1−M)⁻¹M′)²].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct BlockValue {
    pub ln_det: f64,
    pub tr1: f64,
    pub tr2: f64,
}

pub(crate) fn evaluate(rt: RoundTrip, m: usize, xi: f64) -> Result<BlockValue> {
    let dim = rt.m0.nrows();
    let a = DMatrix::<f64>::identity(dim, dim) - rt.m0;
    let lu = a.lu();
    let u = lu.u();
    let mut ln_det = 0.0;
    let mut sign = lu.p().determinant::<f64>();
    for i in 0..dim {
        let d = u[(i, i)];
        sign *= d.signum();
        ln_det += d.abs().ln();
    }
    if !(sign > 0.0) || !ln_det.is_finite() || ln_det > 1e-12 * dim as f64 {
        return Err(CasimirError::SpectralRadius { radius: f64::NAN, m, xi });
    }
    let mut out = BlockValue { ln_det, ..Default::default() };
    if let (Some(m1), Some(m2)) = (rt.m1, rt.m2) {
        let x = lu.solve(&m1).ok_or(CasimirError::IllConditioned { condition: f64::INFINITY })?;
        let y = lu.solve(&m2).ok_or(CasimirError::IllConditioned { condition: f64::INFINITY })?;
        out.tr1 = x.trace();
        out.tr2 = y.trace() + x.component_mul(&x.transpose()).sum();
    }
    Ok(out)
}
