//! Proximity-force (Derjaguin) baselines built from the plane-plane energy
//! density, and the ratio of exact results to them.

use crate::error::{CasimirError, Result};
use crate::materials::DielectricModel;
use crate::planeplane::{per_area, PlanePlaneSpec, Quantity};
use crate::thermal::ThermalSpec;
use std::f64::consts::PI;

/// Proximity-force energy (eV), force (eV/nm) and gradient (eV/nm²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfaResult {
    pub energy: f64,
    pub force: f64,
    pub gradient: f64,
    /// False when L/R ≥ 0.1, where the approximation is not trustworthy.
    pub well_separated: bool,
}

/// Sphere of radius `radius` at closest distance `length` from a plate.
///
/// F = 2πR·𝓕_pp(L), E = 2πR·∫_L^∞ 𝓕_pp and G = −dF/dL = 2πR·(F_pp/A)(L).
pub fn pfa_plane_sphere(
    length: f64,
    radius: f64,
    plate: &DielectricModel,
    sphere: &DielectricModel,
    thermal: &ThermalSpec,
) -> Result<PfaResult> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CasimirError::Domain(format!("sphere radius must be > 0, got {radius}")));
    }
    let spec = PlanePlaneSpec::new(length, plate.clone(), sphere.clone(), *thermal);
    let e = per_area(&spec, Quantity::LengthIntegral)?.0;
    let f = per_area(&spec, Quantity::FreeEnergy)?.0;
    let g = per_area(&spec, Quantity::Force)?.0;
    let k = 2.0 * PI * radius;
    Ok(PfaResult { energy: k * e, force: k * f, gradient: k * g, well_separated: length / radius < 0.1 })
}

/// Two aligned rectangular gratings, ridges facing ridges.
#[derive(Debug, Clone)]
pub struct PfaGratingSpec {
    /// Distance between trench bottoms, nm.
    pub length: f64,
    /// Corrugation depth, nm.
    pub depth: f64,
    /// Period, nm.
    pub period: f64,
    /// Ridge width, nm.
    pub ridge_width: f64,
    pub model1: DielectricModel,
    pub model2: DielectricModel,
}

impl PfaGratingSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.ridge_width > 0.0 && self.ridge_width < self.period) {
            return Err(CasimirError::Domain("ridge width must lie in (0, period)".into()));
        }
        if !(self.depth >= 0.0 && 2.0 * self.depth < self.length) {
            return Err(CasimirError::Domain("grating needs 0 ≤ 2h < L".into()));
        }
        Ok(())
    }
}

/// Force per unit area (eV/nm³) as the area-weighted sum of plate forces at
/// L − 2h (ridges) and L (trenches).
pub fn pfa_grating(spec: &PfaGratingSpec, thermal: &ThermalSpec) -> Result<f64> {
    spec.validate()?;
    let f = |l: f64| {
        let s = PlanePlaneSpec::new(l, spec.model1.clone(), spec.model2.clone(), *thermal);
        per_area(&s, Quantity::Force).map(|r| r.0)
    };
    let w = spec.ridge_width / spec.period;
    let near = f(spec.length - 2.0 * spec.depth)?;
    if w == 1.0 {
        return Ok(near);
    }
    Ok(w * near + (1.0 - w) * f(spec.length)?)
}

/// ρ = exact/PFA. Both arguments must carry the same sign.
pub fn rho_ratio(exact: f64, pfa: f64) -> Result<f64> {
    if !(exact.is_finite() && pfa.is_finite()) || pfa == 0.0 {
        return Err(CasimirError::Domain(format!("cannot form ratio {exact}/{pfa}")));
    }
    if exact != 0.0 && exact.signum() != pfa.signum() {
        return Err(CasimirError::Domain(format!("sign mismatch in ratio {exact}/{pfa}")));
    }
    Ok(exact / pfa)
}
