//! Wick-rotated kinematics and Fresnel amplitudes of plane interfaces.

use crate::error::{CasimirError, Result};
use crate::materials::DielectricModel;
use crate::units::HBAR_C;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

/// Reflection amplitudes at imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub te: f64,
    pub tm: f64,
}

impl ReflectionPair {
    pub const PERFECT: ReflectionPair = ReflectionPair { te: -1.0, tm: 1.0 };
    pub const NONE: ReflectionPair = ReflectionPair { te: 0.0, tm: 0.0 };

    pub fn get(&self, p: Polarization) -> f64 {
        match p {
            Polarization::TE => self.te,
            Polarization::TM => self.tm,
        }
    }
}

/// κ = √(k² + (ξ/ħc)²) in 1/nm.
pub fn kappa(xi: f64, k: f64) -> f64 {
    let q = xi / HBAR_C;
    k.hypot(q)
}

/// κ_t = √(k² + ε (ξ/ħc)²).
pub fn kappa_medium(xi: f64, k: f64, eps: f64) -> f64 {
    let q = xi / HBAR_C;
    (k * k + eps * q * q).sqrt()
}

/// Fresnel amplitudes of a semi-infinite medium of permittivity `eps`.
pub fn fresnel(xi: f64, k: f64, eps: f64) -> Result<ReflectionPair> {
    if !(eps >= 1.0) {
        return Err(CasimirError::Domain(format!("permittivity must be >= 1, got {eps}")));
    }
    if xi < 0.0 || k < 0.0 {
        return Err(CasimirError::Domain("xi and k must be non-negative".into()));
    }
    if xi == 0.0 && k == 0.0 {
        return Err(CasimirError::Domain("reflection undefined at xi = k = 0".into()));
    }
    if eps.is_infinite() {
        return Ok(ReflectionPair::PERFECT);
    }
    let q = xi / HBAR_C;
    let kz = kappa(xi, k);
    let kt = kappa_medium(xi, k, eps);
    // differences written without cancellation so that ε → 1 is exact
    let d = eps - 1.0;
    Ok(ReflectionPair {
        te: -d * q * q / ((kz + kt) * (kz + kt)),
        tm: d * ((eps + 1.0) * k * k + eps * q * q) / ((eps * kz + kt) * (eps * kz + kt)),
    })
}

/// Optical response of one mirror frozen at a single imaginary frequency, so
/// that ε(iξ) is evaluated once per frequency rather than once per wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrozenMirror {
    Perfect,
    /// ε at the frequency, with q = ξ/ħc.
    Medium { eps: f64, q: f64 },
    /// Zero-frequency limits: TE given by the plasma formula with k_P (or 0
    /// when `plasma_k` is `None`), TM constant.
    Static { plasma_k: Option<f64>, te_zero: bool, tm: f64 },
}

impl FrozenMirror {
    pub fn new(model: &DielectricModel, xi: f64) -> Result<Self> {
        if xi == 0.0 {
            return Ok(match model {
                DielectricModel::PerfectMirror => FrozenMirror::Perfect,
                DielectricModel::Plasma { omega_p } => {
                    FrozenMirror::Static { plasma_k: Some(omega_p / HBAR_C), te_zero: false, tm: 1.0 }
                }
                _ => {
                    let r = zero_frequency_reflection(model, 1.0)?;
                    FrozenMirror::Static { plasma_k: None, te_zero: r.te == 0.0, tm: r.tm }
                }
            });
        }
        match model {
            DielectricModel::PerfectMirror => Ok(FrozenMirror::Perfect),
            _ => {
                let eps = model.eval_epsilon(xi)?;
                if !(eps >= 1.0) {
                    return Err(CasimirError::Domain(format!("permittivity must be >= 1, got {eps}")));
                }
                Ok(FrozenMirror::Medium { eps, q: xi / HBAR_C })
            }
        }
    }

    /// Amplitudes at longitudinal wavevector κ (1/nm).
    pub fn at_kappa(&self, kz: f64) -> ReflectionPair {
        match *self {
            FrozenMirror::Perfect => ReflectionPair::PERFECT,
            FrozenMirror::Medium { eps, q } => {
                if eps.is_infinite() {
                    return ReflectionPair::PERFECT;
                }
                let d = eps - 1.0;
                let kt = (kz * kz + d * q * q).sqrt();
                ReflectionPair {
                    te: -d * q * q / ((kz + kt) * (kz + kt)),
                    tm: d * ((eps + 1.0) * kz * kz - q * q) / ((eps * kz + kt) * (eps * kz + kt)),
                }
            }
            FrozenMirror::Static { plasma_k, te_zero, tm } => {
                let te = match plasma_k {
                    Some(kp) => {
                        let kt = kz.hypot(kp);
                        -kp * kp / ((kz + kt) * (kz + kt))
                    }
                    None if te_zero => 0.0,
                    None => -1.0,
                };
                ReflectionPair { te, tm }
            }
        }
    }
}

/// Fresnel amplitudes of a mirror model at imaginary frequency ξ > 0.
///
/// At ξ = 0 this dispatches to [`zero_frequency_reflection`].
pub fn reflection(model: &DielectricModel, xi: f64, k: f64) -> Result<ReflectionPair> {
    if xi == 0.0 {
        return zero_frequency_reflection(model, k);
    }
    match model {
        DielectricModel::PerfectMirror => Ok(ReflectionPair::PERFECT),
        _ => fresnel(xi, k, model.eval_epsilon(xi)?),
    }
}

/// Analytic ξ → 0⁺ limit of the Fresnel amplitudes.
pub fn zero_frequency_reflection(model: &DielectricModel, k: f64) -> Result<ReflectionPair> {
    if !(k > 0.0) {
        return Err(CasimirError::Domain(format!("zero-frequency reflection needs k > 0, got {k}")));
    }
    Ok(match model {
        DielectricModel::PerfectMirror => ReflectionPair::PERFECT,
        DielectricModel::Drude { .. } => ReflectionPair { te: 0.0, tm: 1.0 },
        DielectricModel::Plasma { omega_p } => {
            let kp = omega_p / HBAR_C;
            let kt = k.hypot(kp);
            ReflectionPair { te: (k - kt) / (k + kt), tm: 1.0 }
        }
        DielectricModel::DrudeLorentz { eps0, .. } => ReflectionPair { te: 0.0, tm: (eps0 - 1.0) / (eps0 + 1.0) },
        DielectricModel::Tabulated(t) => match t.tail() {
            Some(_) => ReflectionPair { te: 0.0, tm: 1.0 },
            None => {
                return Err(CasimirError::NotApplicable(
                    "tabulated model without low-frequency extension has no zero-frequency limit".into(),
                ))
            }
        },
    })
}
