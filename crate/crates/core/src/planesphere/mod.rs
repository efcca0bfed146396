//! Sphere in front of a plate: exact scattering-formula free energy, force
//! and gradient in a spherical multipole basis truncated at ℓ_max, plus the
//! large-distance closed forms.

pub mod asymptotic;
pub mod fit;
pub mod laguerre;
pub mod legendre;
pub mod mie;
pub(crate) mod roundtrip;

use crate::error::{CasimirError, Result};
use crate::materials::DielectricModel;
use crate::onedim::central_entropy;
use crate::quad::{integrate_to_infinity_vec, QuadConfig};
use crate::result::{CasimirResult, Diagnostics};
use crate::thermal::{matsubara_sum, ThermalSpec};
use crate::units::HBAR_C;
use laguerre::GaussLaguerre;
use nalgebra::DMatrix;
use rayon::prelude::*;
use roundtrip::{evaluate, round_trip, BlockValue, FrequencyData};
use std::f64::consts::PI;

pub use asymptotic::{analytic_l1_perf, drude_high_t, entropy_l1_perf, plasma_high_t};
pub use fit::{beta_g_fit, BetaFit};
pub use mie::{mie_ab, MieCoefficients};

/// Hard cap on the multipole cutoff.
pub const ELL_MAX_CAP: usize = 255;

/// ℓ_max = ⌈12R/L⌉ clamped to [10, 255].
pub fn default_ell_max(length: f64, radius: f64) -> usize {
    let v = (12.0 * radius / length).ceil();
    if v.is_finite() {
        (v as usize).clamp(10, ELL_MAX_CAP)
    } else {
        ELL_MAX_CAP
    }
}

#[derive(Debug, Clone)]
pub struct PlaneSphereSpec {
    /// Closest surface-to-surface distance L, nm.
    pub length: f64,
    /// Sphere radius R, nm.
    pub radius: f64,
    pub sphere: DielectricModel,
    pub plate: DielectricModel,
    pub thermal: ThermalSpec,
    pub ell_max: usize,
    /// An m-block is negligible below this fraction of the running total.
    pub m_tol: f64,
    /// Relative tolerance of the T = 0 frequency integral.
    pub xi_tol: f64,
    /// Gauss–Laguerre nodes beyond ℓ_max.
    pub extra_nodes: usize,
}

impl PlaneSphereSpec {
    pub fn new(length: f64, radius: f64, sphere: DielectricModel, plate: DielectricModel, thermal: ThermalSpec) -> Self {
        Self {
            length,
            radius,
            sphere,
            plate,
            thermal,
            ell_max: default_ell_max(length, radius),
            m_tol: 1e-10,
            xi_tol: 1e-6,
            extra_nodes: 40,
        }
    }

    /// Sphere and plate made of the same material.
    pub fn symmetric(length: f64, radius: f64, model: DielectricModel, thermal: ThermalSpec) -> Self {
        Self::new(length, radius, model.clone(), model, thermal)
    }

    pub fn with_ell_max(mut self, ell_max: usize) -> Self {
        self.ell_max = ell_max;
        self
    }

    pub fn with_length(&self, length: f64) -> Self {
        Self { length, ..self.clone() }
    }

    pub fn with_thermal(&self, thermal: ThermalSpec) -> Self {
        Self { thermal, ..self.clone() }
    }

    /// Center-to-plate distance 𝓛 = L + R.
    pub fn center_distance(&self) -> f64 {
        self.length + self.radius
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(CasimirError::Domain(format!("separation must be > 0, got {}", self.length)));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(CasimirError::Domain(format!("sphere radius must be > 0, got {}", self.radius)));
        }
        if !(1..=ELL_MAX_CAP).contains(&self.ell_max) {
            return Err(CasimirError::Domain(format!("ℓ_max must lie in [1, {ELL_MAX_CAP}], got {}", self.ell_max)));
        }
        if !(self.m_tol > 0.0 && self.xi_tol > 0.0) {
            return Err(CasimirError::Domain("tolerances must be > 0".into()));
        }
        self.sphere.validate()?;
        self.plate.validate()?;
        self.thermal.validate()
    }

    fn rule(&self) -> GaussLaguerre {
        GaussLaguerre::new(self.ell_max + self.extra_nodes)
    }

    fn frequency_data(&self, xi: f64, rule: &GaussLaguerre) -> Result<FrequencyData> {
        FrequencyData::new(xi, self.ell_max, self.center_distance(), self.radius, &self.sphere, &self.plate, rule)
    }
}

/// D^(m) = 1 − M for one azimuthal number at one imaginary frequency, in the
/// basis (E, ℓ = max(m,1)..ℓ_max) ⊕ (M, same ℓ).
#[derive(Debug, Clone)]
pub struct MultipoleBlock {
    pub m: usize,
    pub xi: f64,
    pub matrix: DMatrix<f64>,
}

impl MultipoleBlock {
    /// ln det D^(m).
    pub fn ln_det(&self) -> Result<f64> {
        let rt = roundtrip::RoundTrip {
            m0: DMatrix::identity(self.matrix.nrows(), self.matrix.ncols()) - &self.matrix,
            m1: None,
            m2: None,
        };
        Ok(evaluate(rt, self.m, self.xi)?.ln_det)
    }
}

/// The round-trip block at azimuthal number `m` (sign of m is irrelevant).
pub fn translation_round_trip(m: usize, xi: f64, spec: &PlaneSphereSpec) -> Result<MultipoleBlock> {
    spec.validate()?;
    if m > spec.ell_max {
        return Err(CasimirError::Domain(format!("|m| = {m} exceeds ℓ_max = {}", spec.ell_max)));
    }
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(CasimirError::Domain(format!("imaginary frequency must be ≥ 0, got {xi}")));
    }
    let rule = spec.rule();
    let fd = spec.frequency_data(xi, &rule)?;
    let rt = round_trip(&fd, m, false);
    let dim = rt.m0.nrows();
    Ok(MultipoleBlock { m, xi, matrix: DMatrix::identity(dim, dim) - rt.m0 })
}

/// Σ_m (ln det, Tr₁, Tr₂) at one frequency, with m > 0 counted twice.
/// Also returns the relative size of the last block kept.
fn sum_over_m(spec: &PlaneSphereSpec, xi: f64, rule: &GaussLaguerre, derivs: bool) -> Result<([f64; 3], f64)> {
    let fd = spec.frequency_data(xi, rule)?;
    if fd.is_trivial() {
        return Ok(([0.0; 3], 0.0));
    }
    let batch = rayon::current_num_threads().max(1);
    let mut total = [0.0; 3];
    let mut quiet = 0;
    let mut last_rel = 0.0;
    let mut m = 0;
    while m <= spec.ell_max {
        let end = (m + batch).min(spec.ell_max + 1);
        let blocks: Vec<Result<BlockValue>> = (m..end).into_par_iter().map(|mm| evaluate(round_trip(&fd, mm, derivs), mm, xi)).collect();
        for (off, b) in blocks.into_iter().enumerate() {
            let mm = m + off;
            let b = b?;
            let w = if mm == 0 { 1.0 } else { 2.0 };
            let c = [w * b.ln_det, w * b.tr1, w * b.tr2];
            let mut rel: f64 = 0.0;
            for k in 0..3 {
                total[k] += c[k];
                if c[k] != 0.0 {
                    rel = rel.max((c[k] / total[k]).abs());
                }
            }
            last_rel = rel;
            quiet = if rel < spec.m_tol { quiet + 1 } else { 0 };
            if quiet >= 2 {
                return Ok((total, last_rel));
            }
        }
        m = end;
    }
    Ok((total, last_rel))
}

/// Energy, force and gradient prefactors applied to the per-frequency sums.
fn combine(v: [f64; 3], weight: f64) -> [f64; 3] {
    [weight * v[0], weight * v[1], -weight * v[2]]
}

/// Relative change of the m = 0 log-determinant when the last multipole is
/// dropped, at the frequency ħc/(2L).
pub fn ell_max_residual(spec: &PlaneSphereSpec) -> Result<f64> {
    let xi = HBAR_C / (2.0 * spec.length);
    let rule = spec.rule();
    let fd = spec.frequency_data(xi, &rule)?;
    let rt = round_trip(&fd, 0, false);
    let n = rt.m0.nrows() / 2;
    if n < 2 {
        return Ok(1.0);
    }
    let keep: Vec<usize> = (0..2 * n).filter(|&i| i != n - 1 && i != 2 * n - 1).collect();
    let sub = DMatrix::from_fn(keep.len(), keep.len(), |i, j| rt.m0[(keep[i], keep[j])]);
    let full = evaluate(rt, 0, xi)?.ln_det;
    let part = evaluate(roundtrip::RoundTrip { m0: sub, m1: None, m2: None }, 0, xi)?.ln_det;
    Ok(if full == 0.0 { 0.0 } else { ((full - part) / full).abs() })
}

fn diagnostics(spec: &PlaneSphereSpec, rule: &GaussLaguerre) -> Result<Diagnostics> {
    let xi = if spec.thermal.is_zero() { HBAR_C / (2.0 * spec.length) } else { spec.thermal.matsubara_xi(1) };
    let (_, m_tail) = sum_over_m(spec, xi, rule, false)?;
    Ok(Diagnostics {
        ell_max: Some(spec.ell_max),
        ell_max_residual: Some(ell_max_residual(spec)?),
        m_tail: Some(m_tail),
        ..Default::default()
    })
}

/// (𝓕, F, G) and diagnostics.
fn compute(spec: &PlaneSphereSpec, derivs: bool) -> Result<([f64; 3], Diagnostics)> {
    spec.validate()?;
    let rule = spec.rule();
    let mut diag = diagnostics(spec, &rule)?;
    if spec.thermal.is_zero() {
        let scale = HBAR_C / (2.0 * spec.length);
        let r = integrate_to_infinity_vec(
            |s| Ok(combine(sum_over_m(spec, s * scale, &rule, derivs)?.0, 1.0)),
            0.0,
            1.0,
            QuadConfig { rel_tol: spec.xi_tol, abs_tol: 0.0, max_intervals: 400 },
        )?;
        let pref = scale / (2.0 * PI);
        diag.quadrature_error = pref * r.error[0];
        return Ok((r.value.map(|v| pref * v), diag));
    }
    let kt = spec.thermal.thermal_energy();
    let sum = matsubara_sum::<3, _>(&spec.thermal, |_, xi| Ok(combine(sum_over_m(spec, xi, &rule, derivs)?.0, 1.0)))?;
    diag.matsubara_terms = sum.terms;
    diag.tail_estimate = kt * sum.tail;
    Ok((sum.value.map(|v| kt * v), diag))
}

/// Free energy (eV), force (eV/nm) and gradient (eV/nm²). The entropy is left
/// out here; see [`entropy_ps`].
pub fn free_energy_ps(spec: &PlaneSphereSpec) -> Result<CasimirResult> {
    let (v, diagnostics) = compute(spec, true)?;
    Ok(CasimirResult { free_energy: v[0], force: v[1], gradient: v[2], entropy: None, diagnostics })
}

/// Free energy alone, skipping the derivative matrices.
pub fn free_energy_only_ps(spec: &PlaneSphereSpec) -> Result<f64> {
    Ok(compute(spec, false)?.0[0])
}

pub fn force_ps(spec: &PlaneSphereSpec) -> Result<f64> {
    Ok(compute(spec, true)?.0[1])
}

pub fn gradient_ps(spec: &PlaneSphereSpec) -> Result<f64> {
    Ok(compute(spec, true)?.0[2])
}

/// Entropy −∂𝓕/∂T (eV/K) by central differences.
pub fn entropy_ps(spec: &PlaneSphereSpec) -> Result<f64> {
    if spec.thermal.is_zero() {
        return Err(CasimirError::Domain("entropy requires T > 0".into()));
    }
    central_entropy(spec.thermal.temperature, |t| free_energy_only_ps(&spec.with_thermal(spec.thermal.with_temperature(t))))
}

/// ϑ = F(L, T)/F(L, 0).
pub fn theta_ratio(spec: &PlaneSphereSpec) -> Result<f64> {
    let hot = force_ps(spec)?;
    let cold = force_ps(&spec.with_thermal(ThermalSpec::zero().with_tolerance(spec.thermal.tolerance)))?;
    crate::pfa::rho_ratio(hot, cold)
}
