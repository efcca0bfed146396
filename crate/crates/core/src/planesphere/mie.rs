//! Mie coefficients of a homogeneous sphere at imaginary frequency, built from
//! modified spherical Bessel functions and kept in logarithmic form.
//!
//! Sign convention: for a perfect sphere a_ℓ > 0 and b_ℓ < 0.

use crate::error::{CasimirError, Result};
use crate::materials::DielectricModel;
use crate::units::HBAR_C;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieCoefficients {
    pub ell: usize,
    pub a: f64,
    pub b: f64,
}

/// ln|a_ℓ|, ln|b_ℓ| and their signs for ℓ = 1..=lmax (index ℓ−1).
#[derive(Debug, Clone, Default)]
pub struct MieLogs {
    pub ln_a: Vec<f64>,
    pub sign_a: Vec<f64>,
    pub ln_b: Vec<f64>,
    pub sign_b: Vec<f64>,
}

/// ρ_ℓ = i_ℓ(z)/i_{ℓ−1}(z) for ℓ = 1..=lmax (index ℓ−1).
pub(crate) fn i_ratios(z: f64, lmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; lmax];
    if lmax == 0 {
        return out;
    }
    let top_l = lmax + 1;
    let threshold = 0.5 * (top_l as f64 + 1.0).powi(2);
    let (mut rho, start) = if z > 50.0 && z > threshold {
        // closed-form Hankel sums are well conditioned here
        (hankel_sum(top_l, z) / hankel_sum(lmax, z), lmax)
    } else {
        let top = lmax + 60 + z.ceil() as usize;
        let nu = top as f64 + 1.5;
        (z / (nu + (nu * nu + z * z).sqrt()), top)
    };
    for l in (1..=start).rev() {
        rho = 1.0 / ((2 * l + 1) as f64 / z + rho);
        if l <= lmax {
            out[l - 1] = rho;
        }
    }
    out
}

/// Σ_k (ℓ+k)!/(k!(ℓ−k)!)·(−2z)^{−k}, proportional to i_ℓ(z) when e^{−2z} is negligible.
fn hankel_sum(l: usize, z: f64) -> f64 {
    let mut c = 1.0;
    let mut s = 1.0;
    for k in 0..l {
        let kf = k as f64;
        c *= -((l as f64 + kf + 1.0) * (l as f64 - kf)) / ((kf + 1.0) * 2.0 * z);
        s += c;
    }
    s
}

fn ln_i0(z: f64) -> f64 {
    if z > 20.0 {
        z - (2.0 * z).ln() + (-(-2.0 * z).exp()).ln_1p()
    } else {
        (z.sinh() / z).ln()
    }
}

/// ln i_ℓ(z) − ln k_ℓ(z), D_i(z) and D_k(z) for ℓ = 1..=lmax.
struct BesselData {
    ln_ik: Vec<f64>,
    di: Vec<f64>,
    dk: Vec<f64>,
}

fn bessel_data(z: f64, lmax: usize) -> BesselData {
    let rho = i_ratios(z, lmax);
    let mut ln_i = ln_i0(z);
    let mut ln_k = (FRAC_PI_2).ln() - z - z.ln();
    let mut q = 0.0;
    let mut out = BesselData { ln_ik: Vec::with_capacity(lmax), di: Vec::with_capacity(lmax), dk: Vec::with_capacity(lmax) };
    for l in 1..=lmax {
        let lf = l as f64;
        // q_ℓ = k_ℓ/k_{ℓ−1}
        q = if l == 1 { 1.0 + 1.0 / z } else { 1.0 / q + (2.0 * lf - 1.0) / z };
        ln_k += q.ln();
        ln_i += rho[l - 1].ln();
        out.ln_ik.push(ln_i - ln_k);
        out.di.push(z / rho[l - 1] - lf);
        out.dk.push(-lf - z / q);
    }
    out
}

/// D_i(z) for ℓ = 1..=lmax.
fn di_only(z: f64, lmax: usize) -> Vec<f64> {
    i_ratios(z, lmax).iter().enumerate().map(|(i, r)| z / r - (i + 1) as f64).collect()
}

/// Mie coefficients for ℓ = 1..=lmax at size parameter χ = ξR/ħc and
/// permittivity `eps` (∞ for a perfect mirror).
pub fn mie_logs(lmax: usize, chi: f64, eps: f64) -> Result<MieLogs> {
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(CasimirError::Domain(format!("Mie size parameter must be > 0, got {chi}")));
    }
    let bd = bessel_data(chi, lmax);
    let mut out = MieLogs::default();
    let ln_pre = FRAC_PI_2.ln();
    let perfect = eps.is_infinite();
    let di_n = if perfect || eps == 1.0 { Vec::new() } else { di_only(eps.sqrt() * chi, lmax) };
    for l in 0..lmax {
        let base = ln_pre + bd.ln_ik[l];
        let (fa, fb) = if perfect {
            (bd.di[l] / bd.dk[l], 1.0)
        } else if eps == 1.0 {
            (0.0, 0.0)
        } else {
            let dn = di_n[l];
            ((eps * bd.di[l] - dn) / (eps * bd.dk[l] - dn), (bd.di[l] - dn) / (bd.dk[l] - dn))
        };
        let la = base + fa.abs().ln();
        let lb = base + fb.abs().ln();
        if la.is_nan() || lb.is_nan() || la == f64::INFINITY || lb == f64::INFINITY {
            return Err(CasimirError::Numeric(format!("Mie coefficient overflow at ℓ = {}, ξR/ħc = {chi}", l + 1)));
        }
        out.ln_a.push(la);
        out.sign_a.push(-fa.signum());
        out.ln_b.push(lb);
        out.sign_b.push(-fb.signum());
    }
    Ok(out)
}

/// Mie coefficients a_ℓ, b_ℓ of a sphere of radius `radius` (nm) at imaginary
/// frequency ξ (eV).
pub fn mie_ab(ell: usize, xi: f64, radius: f64, model: &DielectricModel) -> Result<MieCoefficients> {
    if ell == 0 {
        return Err(CasimirError::Domain("Mie coefficients need ℓ ≥ 1".into()));
    }
    if !(xi > 0.0 && radius > 0.0) {
        return Err(CasimirError::Domain("Mie coefficients need ξ > 0 and R > 0".into()));
    }
    let eps = model.eval_epsilon(xi)?;
    let m = mie_logs(ell, xi * radius / HBAR_C, eps)?;
    let i = ell - 1;
    Ok(MieCoefficients { ell, a: m.sign_a[i] * m.ln_a[i].exp(), b: m.sign_b[i] * m.ln_b[i].exp() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // (ℓ, χ, ε, ln|a|, ln|b|) from 50-digit arithmetic
        let cases: [(usize, f64, f64, f64, f64); 7] = [
            (1, 0.5, f64::INFINITY, -2.495_090_773_484_951, -3.058_607_568_695_679_2),
            (7, 3.2, f64::INFINITY, -8.107_504_154_678_312_6, -8.211_140_866_233_635_3),
            (40, 2.0, f64::INFINITY, -219.428_722_028_598_75, -219.453_324_527_316_31),
            (3, 1.3, 5.7, -5.504_982_144_145_427_4, -7.614_245_750_205_934_7),
            (20, 15.0, 1e4, 4.266_788_684_777_851_6, 4.219_077_994_094_844_9),
            (2, 800.0, 2.5, 1_597.808_362_456_083, 1_597.808_350_576_487_2),
            (150, 0.3, 40.0, -1_779.973_491_728_901_4, -1_790.095_266_802_893_3),
        ];
        for (l, chi, eps, la, lb) in cases {
            let m = mie_logs(l, chi, eps).unwrap();
            let (ga, gb) = (m.ln_a[l - 1], m.ln_b[l - 1]);
            assert!((ga - la).abs() < 1e-10 * la.abs().max(1.0), "a ℓ={l} χ={chi}: {ga} vs {la}");
            assert!((gb - lb).abs() < 1e-10 * lb.abs().max(1.0), "b ℓ={l} χ={chi}: {gb} vs {lb}");
            assert_eq!((m.sign_a[l - 1], m.sign_b[l - 1]), (1.0, -1.0));
        }
    }

    #[test]
    fn small_sphere_limits() {
        let chi = 1e-3;
        let p = mie_logs(1, chi, f64::INFINITY).unwrap();
        assert!((p.ln_a[0].exp() / chi.powi(3) - 2.0 / 3.0).abs() < 1e-5);
        assert!((p.ln_b[0].exp() / chi.powi(3) - 1.0 / 3.0).abs() < 1e-5);
        // dielectric dipole: (2/3)(ε−1)/(ε+2)
        let d = mie_logs(1, chi, 4.0).unwrap();
        assert!((d.ln_a[0].exp() / chi.powi(3) - 2.0 / 3.0 * 0.5).abs() < 1e-5);
        let v = mie_logs(3, 0.7, 1.0).unwrap();
        assert!(v.ln_a.iter().chain(&v.ln_b).all(|x| *x == f64::NEG_INFINITY));
    }

    #[test]
    fn large_size_parameter_stays_finite() {
        let m = mie_logs(255, 1e4, f64::INFINITY).unwrap();
        assert!(m.ln_a.iter().all(|v| v.is_finite()));
        let m = mie_logs(255, 1e-6, 1e8).unwrap();
        assert!(m.ln_b.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn decreasing_beyond_size_parameter() {
        let m = mie_logs(60, 5.0, f64::INFINITY).unwrap();
        for l in 10..59 {
            assert!(m.ln_a[l + 1] < m.ln_a[l]);
        }
        let d = DielectricModel::drude(9.0, 0.035).unwrap();
        let c = mie_ab(2, 0.5, 200.0, &d).unwrap();
        assert!(c.a > 0.0 && c.b < 0.0);
    }
}

/// Leading small-χ coefficients a_ℓ ≈ A_ℓχ^{2ℓ+1}, b_ℓ ≈ B_ℓχ^{2ℓ+1} of the
/// zero-frequency limit, as logs and signs for ℓ = 1..=lmax.
pub fn static_mie_logs(lmax: usize, radius: f64, model: &DielectricModel) -> Result<MieLogs> {
    use crate::planesphere::legendre::ln_factorials;
    let lf = ln_factorials(2 * lmax + 2);
    let ln2 = 2f64.ln();
    // ln (2ℓ−1)!! = ln (2ℓ)! − ℓ ln 2 − ln ℓ!
    let ln_dfact = |l: usize| lf[2 * l] - l as f64 * ln2 - lf[l];
    let plasma_ratio = match model {
        DielectricModel::Plasma { omega_p } => Some(i_ratios(omega_p * radius / HBAR_C, lmax + 1)),
        _ => None,
    };
    let (conducting, magnetic) = match model {
        DielectricModel::PerfectMirror => (true, true),
        DielectricModel::Plasma { .. } => (true, true),
        DielectricModel::Drude { .. } => (true, false),
        DielectricModel::DrudeLorentz { .. } => (false, false),
        DielectricModel::Tabulated(t) => {
            if t.tail().is_none() {
                return Err(CasimirError::NotApplicable(
                    "tabulated model without low-frequency extension has no zero-frequency limit".into(),
                ));
            }
            (true, false)
        }
    };
    let mut out = MieLogs::default();
    for l in 1..=lmax {
        let l_f = l as f64;
        let dd = ln_dfact(l) + ln_dfact(l + 1);
        let la = if conducting {
            (l_f + 1.0).ln() - l_f.ln() - dd
        } else {
            let DielectricModel::DrudeLorentz { eps0, .. } = model else { unreachable!() };
            (eps0 - 1.0).ln() + (l_f + 1.0).ln() - dd - (eps0 * l_f + l_f + 1.0).ln()
        };
        let lb = if !magnetic {
            f64::NEG_INFINITY
        } else {
            match &plasma_ratio {
                Some(r) => -dd + (r[l] * r[l - 1]).ln(),
                None => -dd,
            }
        };
        out.ln_a.push(la);
        out.sign_a.push(1.0);
        out.ln_b.push(lb);
        out.sign_b.push(-1.0);
    }
    Ok(out)
}
