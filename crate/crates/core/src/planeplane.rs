//! Lifshitz free energy, force and force gradient between two parallel plates.
//!
//! The radial k-integral at each imaginary frequency is written in the
//! variable y = 2κL, running over (2ξL/ħc, ∞).

use crate::error::{CasimirError, Result};
use crate::materials::DielectricModel;
use crate::onedim::central_entropy;
use crate::quad::{integrate_to_infinity, QuadConfig};
use crate::result::{CasimirResult, Diagnostics};
use crate::special::dilog;
use crate::specular::{FrozenMirror, ReflectionPair};
use crate::thermal::{matsubara_sum, ThermalSpec};
use crate::units::HBAR_C;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct PlanePlaneSpec {
    /// Separation, nm.
    pub length: f64,
    /// Plate area, nm². Only used to convert per-area values to totals.
    pub area: f64,
    pub model1: DielectricModel,
    pub model2: DielectricModel,
    pub thermal: ThermalSpec,
    /// Relative tolerance of the k-quadrature.
    pub quad_tol: f64,
}

impl PlanePlaneSpec {
    pub fn new(length: f64, model1: DielectricModel, model2: DielectricModel, thermal: ThermalSpec) -> Self {
        Self { length, area: 1.0, model1, model2, thermal, quad_tol: 1e-9 }
    }

    /// Same mirror model on both sides.
    pub fn symmetric(length: f64, model: DielectricModel, thermal: ThermalSpec) -> Self {
        Self::new(length, model.clone(), model, thermal)
    }

    pub fn with_area(mut self, area: f64) -> Self {
        self.area = area;
        self
    }

    pub fn with_length(&self, length: f64) -> Self {
        Self { length, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(CasimirError::Domain(format!("separation must be > 0, got {}", self.length)));
        }
        if !(self.area > 0.0 && self.area.is_finite()) {
            return Err(CasimirError::Domain(format!("area must be > 0, got {}", self.area)));
        }
        if !(self.quad_tol > 0.0) {
            return Err(CasimirError::Domain("quadrature tolerance must be > 0".into()));
        }
        self.model1.validate()?;
        self.model2.validate()?;
        self.thermal.validate()
    }
}

/// Which L-derivative of the free energy to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// 𝓕/A.
    FreeEnergy,
    /// F/A = −∂(𝓕/A)/∂L.
    Force,
    /// G/A = −∂(F/A)/∂L.
    Gradient,
    /// ∫_L^∞ 𝓕/A dL′, the proximity-force energy kernel.
    LengthIntegral,
}

/// 1 − r1r2e^{−y}, accurate when r1r2 → 1 and y → 0.
#[inline]
fn one_minus_u(rr: f64, y: f64) -> f64 {
    (1.0 - rr) - rr * (-y).exp_m1()
}

#[inline]
fn kernel(q: Quantity, rr: f64, y: f64, length: f64) -> f64 {
    if rr == 0.0 {
        return 0.0;
    }
    let u = rr * (-y).exp();
    match q {
        Quantity::FreeEnergy => {
            if u.abs() < 0.5 {
                (-u).ln_1p()
            } else {
                one_minus_u(rr, y).ln()
            }
        }
        Quantity::Force => -(y / length) * u / one_minus_u(rr, y),
        Quantity::Gradient => {
            let d = one_minus_u(rr, y);
            -(y / length) * (y / length) * u / (d * d)
        }
        // ∫_L^∞ ln(1 − u e^{−2κ(L′−L)}) dL′ = −Li₂(u)/(2κ)
        Quantity::LengthIntegral => -dilog(u) * length / y,
    }
}

/// ∫ d²k/4π² Σ_p of the chosen kernel at imaginary frequency ξ (per area).
fn k_integral(spec: &PlanePlaneSpec, q: Quantity, xi: f64, tol: f64) -> Result<(f64, f64)> {
    let m1 = FrozenMirror::new(&spec.model1, xi)?;
    let m2 = FrozenMirror::new(&spec.model2, xi)?;
    let l = spec.length;
    let y0 = 2.0 * xi * l / HBAR_C;
    let pair = |y: f64| -> (ReflectionPair, ReflectionPair) {
        let kz = y / (2.0 * l);
        (m1.at_kappa(kz), m2.at_kappa(kz))
    };
    let r = integrate_to_infinity(
        |y| {
            let (a, b) = pair(y);
            y * (kernel(q, a.te * b.te, y, l) + kernel(q, a.tm * b.tm, y, l))
        },
        y0,
        1.0,
        QuadConfig::rel(tol),
    )?;
    let pref = 1.0 / (8.0 * PI * l * l);
    Ok((pref * r.value, pref * r.error))
}

/// The chosen quantity per unit area with convergence diagnostics.
pub fn per_area(spec: &PlanePlaneSpec, q: Quantity) -> Result<(f64, Diagnostics)> {
    spec.validate()?;
    let mut diag = Diagnostics::default();
    if spec.thermal.is_zero() {
        // E/A = ∫dξ/2π I(ξ) with ξ = s·ħc/(2L). The inner rule runs tighter
        // so its noise stays below the outer tolerance.
        let scale = HBAR_C / (2.0 * spec.length);
        let mut failure = None;
        let mut inner_err = 0.0;
        let outer = integrate_to_infinity(
            |s| match k_integral(spec, q, s * scale, 1e-2 * spec.quad_tol) {
                Ok((v, e)) => {
                    inner_err += e.abs();
                    v
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            1.0,
            QuadConfig::rel(spec.quad_tol),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let pref = scale / (2.0 * PI);
        diag.quadrature_error = pref * (outer.error + inner_err / outer.evaluations.max(1) as f64);
        return Ok((pref * outer.value, diag));
    }
    let kt = spec.thermal.thermal_energy();
    let sum = matsubara_sum::<2, _>(&spec.thermal, |_, xi| {
        let (v, e) = k_integral(spec, q, xi, spec.quad_tol)?;
        Ok([v, e.abs()])
    })?;
    diag.matsubara_terms = sum.terms;
    diag.tail_estimate = kt * sum.tail;
    diag.quadrature_error = kt * sum.value[1];
    Ok((kt * sum.value[0], diag))
}

fn total(spec: &PlanePlaneSpec, q: Quantity) -> Result<(f64, Diagnostics)> {
    let (v, d) = per_area(spec, q)?;
    Ok((v * spec.area, d))
}

/// Free energy, force and gradient (totals over the area `spec.area`).
/// Entropy is included when T > 0.
pub fn free_energy_pp(spec: &PlanePlaneSpec) -> Result<CasimirResult> {
    let (e, mut diag) = total(spec, Quantity::FreeEnergy)?;
    let (f, df) = total(spec, Quantity::Force)?;
    let (g, dg) = total(spec, Quantity::Gradient)?;
    diag.merge(&df);
    diag.merge(&dg);
    let entropy = if spec.thermal.is_zero() { None } else { Some(entropy_pp(spec)?) };
    Ok(CasimirResult { free_energy: e, force: f, gradient: g, entropy, diagnostics: diag })
}

/// Zero-temperature energy (eV) over the area.
pub fn energy_pp_t0(spec: &PlanePlaneSpec) -> Result<f64> {
    if !spec.thermal.is_zero() {
        return Err(CasimirError::Domain("energy_pp_t0 requires T = 0".into()));
    }
    Ok(total(spec, Quantity::FreeEnergy)?.0)
}

/// Force F = −∂𝓕/∂L (eV/nm) over the area.
pub fn force_pp(spec: &PlanePlaneSpec) -> Result<f64> {
    Ok(total(spec, Quantity::Force)?.0)
}

/// Force gradient G = −∂F/∂L (eV/nm²) over the area.
pub fn gradient_pp(spec: &PlanePlaneSpec) -> Result<f64> {
    Ok(total(spec, Quantity::Gradient)?.0)
}

/// Entropy −∂𝓕/∂T (eV/K) over the area.
pub fn entropy_pp(spec: &PlanePlaneSpec) -> Result<f64> {
    if spec.thermal.is_zero() {
        return Err(CasimirError::Domain("entropy requires T > 0".into()));
    }
    let free = |t: f64| {
        let s = PlanePlaneSpec { thermal: spec.thermal.with_temperature(t), ..spec.clone() };
        total(&s, Quantity::FreeEnergy).map(|r| r.0)
    };
    central_entropy(spec.thermal.temperature, free)
}

/// Ideal zero-temperature energy per area, −π²ħc/(720L³) (eV/nm²).
pub fn ideal_energy_per_area(length: f64) -> f64 {
    -PI * PI * HBAR_C / (720.0 * length.powi(3))
}

/// Ideal zero-temperature force per area, −π²ħc/(240L⁴) (eV/nm³).
pub fn ideal_force_per_area(length: f64) -> f64 {
    -PI * PI * HBAR_C / (240.0 * length.powi(4))
}

/// E/E_perfect at the same separation and temperature.
pub fn reduction_factor(spec: &PlanePlaneSpec) -> Result<f64> {
    let (e, _) = per_area(spec, Quantity::FreeEnergy)?;
    let ideal = if spec.thermal.is_zero() {
        ideal_energy_per_area(spec.length)
    } else {
        let p = PlanePlaneSpec::symmetric(spec.length, DielectricModel::PerfectMirror, spec.thermal);
        per_area(&p, Quantity::FreeEnergy)?.0
    };
    Ok(e / ideal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perfect(l: f64, t: ThermalSpec) -> PlanePlaneSpec {
        PlanePlaneSpec::symmetric(l, DielectricModel::PerfectMirror, t)
    }

    #[test]
    fn ideal_law_t0() {
        for &l in &[100.0, 1000.0] {
            let s = perfect(l, ThermalSpec::zero());
            let e = per_area(&s, Quantity::FreeEnergy).unwrap().0;
            let f = per_area(&s, Quantity::Force).unwrap().0;
            assert!((e / ideal_energy_per_area(l) - 1.0).abs() < 1e-7, "{e}");
            assert!((f / ideal_force_per_area(l) - 1.0).abs() < 1e-7, "{f}");
        }
        assert!((ideal_energy_per_area(1000.0) + 2.704_915_6e-9).abs() < 1e-15);
    }

    #[test]
    fn gradient_is_four_force_over_l() {
        let l = 300.0;
        let s = perfect(l, ThermalSpec::zero());
        let f = force_pp(&s).unwrap();
        let g = gradient_pp(&s).unwrap();
        assert!((g / (4.0 * f / l) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn length_integral_of_ideal_law() {
        // ∫_L^∞ −π²ħc/(720L′³) dL′ = −π²ħc/(1440L²)
        let l = 200.0;
        let s = perfect(l, ThermalSpec::zero());
        let v = per_area(&s, Quantity::LengthIntegral).unwrap().0;
        assert!((v / (ideal_energy_per_area(l) * l / 2.0) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn vacuum_plates_do_nothing() {
        let v = DielectricModel::vacuum();
        let s = PlanePlaneSpec::symmetric(100.0, v, ThermalSpec::new(300.0).unwrap());
        let r = free_energy_pp(&s).unwrap();
        assert_eq!((r.free_energy, r.force, r.gradient), (0.0, 0.0, 0.0));
        assert_eq!(r.entropy, Some(0.0));
    }

    #[test]
    fn rejects_bad_spec() {
        let s = perfect(-1.0, ThermalSpec::zero());
        assert!(matches!(free_energy_pp(&s), Err(CasimirError::Domain(_))));
        assert!(perfect(1.0, ThermalSpec::zero()).with_area(0.0).validate().is_err());
    }

    #[test]
    fn area_scales_totals() {
        let s = perfect(500.0, ThermalSpec::zero()).with_area(1e6);
        let e = energy_pp_t0(&s).unwrap();
        assert!((e / (1e6 * ideal_energy_per_area(500.0)) - 1.0).abs() < 1e-7);
    }
}
