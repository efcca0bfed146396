//! Lateral Casimir energy and torque between two plates carrying parallel
//! sinusoidal corrugations, to second order in the amplitudes.
//!
//! Profiles are h1 = a1 cos(k_C x) and h2 = a2 cos(k_C (x − b)), both counted
//! positive where they reduce the gap, so the local separation is L − h1 − h2.
//! The crest-dependent part of the energy is
//!
//! δE = (A/2)·G_C(k_C)·a1·a2·cos(k_C b),
//!
//! with G_C(0) = ∂²(𝓔_pp/A)/∂L². G_C is negative: aligned crests (b = 0) are
//! the stable configuration.

use crate::error::{CasimirError, Result};
use crate::materials::DielectricModel;
use crate::planeplane::{per_area, PlanePlaneSpec, Quantity};
use crate::quad::{integrate, Integral, integrate_to_infinity, integrate_to_infinity_vec, QuadConfig};
use crate::specular::FrozenMirror;
use crate::thermal::{matsubara_sum, ThermalSpec};
use crate::units::HBAR_C;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone)]
pub struct CorrugationSpec {
    /// Mean separation, nm.
    pub length: f64,
    /// Corrugation amplitudes, nm.
    pub a1: f64,
    pub a2: f64,
    /// Corrugation wavelength λ_C, nm.
    pub wavelength: f64,
    /// Lateral crest mismatch, nm.
    pub shift: f64,
    /// Relative rotation, rad.
    pub theta: f64,
    /// Corrugated area Lx × Ly, nm.
    pub lx: f64,
    pub ly: f64,
    /// Same material on both plates.
    pub model: DielectricModel,
    pub thermal: ThermalSpec,
    /// Relative tolerance of the outer frequency integral.
    pub quad_tol: f64,
}

impl CorrugationSpec {
    pub fn new(length: f64, a1: f64, a2: f64, wavelength: f64, model: DielectricModel) -> Self {
        Self {
            length,
            a1,
            a2,
            wavelength,
            shift: 0.0,
            theta: 0.0,
            lx: 1.0e5,
            ly: 1.0e5,
            model,
            thermal: ThermalSpec::zero(),
            quad_tol: 1e-6,
        }
    }

    pub fn with_shift(mut self, b: f64) -> Self {
        self.shift = b;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_area(mut self, lx: f64, ly: f64) -> Self {
        self.lx = lx;
        self.ly = ly;
        self
    }

    pub fn with_thermal(mut self, thermal: ThermalSpec) -> Self {
        self.thermal = thermal;
        self
    }

    pub fn k_c(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    /// Smallest of λ_C, L and the plasma wavelength, against which the
    /// amplitudes must be small.
    fn amplitude_scale(&self) -> f64 {
        let mut s = self.wavelength.min(self.length);
        if let Some(lp) = self.model.plasma_wavelength() {
            s = s.min(lp);
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("separation", self.length), ("corrugation wavelength", self.wavelength)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CasimirError::Domain(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [("Lx", self.lx), ("Ly", self.ly)] {
            if !(v > self.length && v.is_finite()) {
                return Err(CasimirError::Domain(format!("{name} = {v} must exceed the separation")));
            }
        }
        let limit = 0.2 * self.amplitude_scale();
        for (name, a) in [("a1", self.a1), ("a2", self.a2)] {
            if !(a >= 0.0 && a < limit) {
                return Err(CasimirError::Domain(format!(
                    "{name} = {a} outside the perturbative range [0, {limit})"
                )));
            }
        }
        if !self.shift.is_finite() || !(self.theta.abs() < 0.1) {
            return Err(CasimirError::Domain("shift must be finite and |theta| < 0.1 rad".into()));
        }
        if !(self.quad_tol > 0.0) {
            return Err(CasimirError::Domain("quadrature tolerance must be > 0".into()));
        }
        self.model.validate()?;
        self.thermal.validate()
    }

    /// Non-fatal remarks, e.g. amplitudes above a tenth of the smallest scale.
    pub fn warnings(&self) -> Vec<String> {
        let soft = 0.1 * self.amplitude_scale();
        [("a1", self.a1), ("a2", self.a2)]
            .into_iter()
            .filter(|&(_, a)| a > soft)
            .map(|(n, a)| format!("{n} = {a} nm exceeds 0.1 × {:.4} nm; second-order result is marginal", soft * 10.0))
            .collect()
    }
}

/// First-order surface response of one mirror at a fixed frequency.
///
/// `w` = (ε − 1)·(ξ/ħc)² and `eta` = 1/ε, both finite in the static limits.
#[derive(Debug, Clone, Copy)]
enum Plate {
    Perfect,
    Medium { w: f64, eta: f64 },
}

impl Plate {
    fn new(model: &DielectricModel, xi: f64) -> Result<Self> {
        Ok(match FrozenMirror::new(model, xi)? {
            FrozenMirror::Perfect => Plate::Perfect,
            FrozenMirror::Medium { eps, .. } if eps.is_infinite() => Plate::Perfect,
            FrozenMirror::Medium { eps, q } => Plate::Medium { w: (eps - 1.0) * q * q, eta: 1.0 / eps },
            FrozenMirror::Static { plasma_k, te_zero, tm } => match plasma_k {
                Some(kp) => Plate::Medium { w: kp * kp, eta: 0.0 },
                None if te_zero => Plate::Medium { w: 0.0, eta: (1.0 - tm) / (1.0 + tm) },
                None => Plate::Perfect,
            },
        })
    }
}

/// Transverse wavevector with its vertical decay constants.
#[derive(Debug, Clone, Copy)]
struct Wave {
    kx: f64,
    ky: f64,
    k: f64,
    kappa: f64,
    /// Decay constant inside the medium (unused for perfect mirrors).
    kappa_t: f64,
}

impl Wave {
    fn new(kx: f64, ky: f64, q2: f64, plate: Plate) -> Self {
        let k = kx.hypot(ky);
        let kappa = (k * k + q2).sqrt();
        let kappa_t = match plate {
            Plate::Perfect => f64::INFINITY,
            Plate::Medium { w, .. } => (kappa * kappa + w).sqrt(),
        };
        Wave { kx, ky, k, kappa, kappa_t }
    }

    /// Specular amplitudes (TE, TM).
    fn fresnel(&self, plate: Plate) -> (f64, f64) {
        match plate {
            Plate::Perfect => (-1.0, 1.0),
            Plate::Medium { w, eta } => {
                let s = self.kappa + self.kappa_t;
                (-w / (s * s), (self.kappa - eta * self.kappa_t) / (self.kappa + eta * self.kappa_t))
            }
        }
    }
}

/// cos and sin of the angle from `from` to `to`.
fn angle(to: &Wave, from: &Wave) -> (f64, f64) {
    let n = to.k * from.k;
    if n == 0.0 {
        return (1.0, 0.0);
    }
    ((to.kx * from.kx + to.ky * from.ky) / n, (from.kx * to.ky - from.ky * to.kx) / n)
}

/// First-order scattering amplitudes from `from` into `to` per unit Fourier
/// amplitude of the profile: [ss, pp, sp, ps], with the two cross terms in a
/// real normalization whose product enters the round-trip trace directly.
fn amplitudes(plate: Plate, q2: f64, to: &Wave, from: &Wave) -> [f64; 4] {
    let (c, s) = angle(to, from);
    match plate {
        Plate::Perfect => [
            -2.0 * from.kappa * c,
            2.0 * (from.k * to.k + q2 * c) / to.kappa,
            2.0 * q2 * s,
            -2.0 * from.kappa * s / to.kappa,
        ],
        Plate::Medium { w, eta } => {
            let ts = 2.0 * from.kappa / (from.kappa + from.kappa_t);
            let tp = 2.0 * from.kappa * (1.0 - eta) / (from.kappa + eta * from.kappa_t);
            [
                -w * ts * c / (to.kappa + to.kappa_t),
                tp * (from.k * to.k + eta * from.kappa_t * to.kappa_t * c) / (to.kappa + eta * to.kappa_t),
                q2 * tp * from.kappa_t * s / (to.kappa + to.kappa_t),
                -(1.0 - eta) * ts * to.kappa_t * s / (to.kappa + eta * to.kappa_t),
            ]
        }
    }
}

/// Round-trip trace at wavevectors k = p − k_C/2 and k′ = p + k_C/2 (along x),
/// including the propagation factor e^{−(κ+κ′)L}.
fn trace(plate: Plate, q2: f64, length: f64, k_c: f64, px: f64, py: f64) -> f64 {
    let a = Wave::new(px - 0.5 * k_c, py, q2, plate);
    let b = Wave::new(px + 0.5 * k_c, py, q2, plate);
    let prop = (-(a.kappa + b.kappa) * length).exp();
    if prop == 0.0 {
        return 0.0;
    }
    let (rs_a, rp_a) = a.fresnel(plate);
    let (rs_b, rp_b) = b.fresnel(plate);
    let e2a = (-2.0 * a.kappa * length).exp();
    let e2b = (-2.0 * b.kappa * length).exp();
    let (ds_a, dp_a) = (1.0 - rs_a * rs_a * e2a, 1.0 - rp_a * rp_a * e2a);
    let (ds_b, dp_b) = (1.0 - rs_b * rs_b * e2b, 1.0 - rp_b * rp_b * e2b);
    let ab = amplitudes(plate, q2, &a, &b);
    let ba = amplitudes(plate, q2, &b, &a);
    let sum = ab[0] * ba[0] / (ds_a * ds_b)
        + ab[1] * ba[1] / (dp_a * dp_b)
        + ab[2] * ba[3] / (ds_a * dp_b)
        + ab[3] * ba[2] / (dp_a * ds_b);
    prop * sum
}

/// ∫d²p/(2π)² of the trace at one frequency, and an error estimate.
fn wavevector_integral(plate: Plate, xi: f64, length: f64, k_c: f64, tol: f64) -> Result<(f64, f64)> {
    let q2 = (xi / HBAR_C).powi(2);
    // magnitude of the specular (k_C = 0) integral sets absolute floors, so
    // that negligible pieces are not resolved to relative precision
    let scale = integrate_to_infinity(
        |p| p * trace(plate, q2, length, 0.0, p, 0.0).abs(),
        0.0,
        0.5 / length,
        QuadConfig::rel(1e-3),
    )?
    .value
    .max(f64::MIN_POSITIVE);
    let cfg = QuadConfig { rel_tol: tol, abs_tol: 1e-2 * tol * scale, ..QuadConfig::default() };
    let cfg_phi = QuadConfig { abs_tol: cfg.abs_tol * 4.0 * length * length, ..cfg };
    let mut failure = None;
    let mut err = 0.0;
    let mut radial = |p: f64| -> f64 {
        let r = integrate(
            |phi: f64| trace(plate, q2, length, k_c, p * phi.cos(), p * phi.sin()),
            0.0,
            FRAC_PI_2,
            cfg_phi,
        );
        match r {
            Ok(v) => {
                err += v.error * p;
                p * v.value
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let split = 0.5 * k_c;
    let near = if split > 0.0 { integrate(&mut radial, 0.0, split, cfg)? } else { Integral { value: 0.0, error: 0.0, evaluations: 0 } };
    let far = integrate_to_infinity(&mut radial, split, 0.5 / length, cfg)?;
    if let Some(e) = failure {
        return Err(e);
    }
    // the quarter plane covers a quarter of the symmetric integrand
    let pref = 4.0 / (4.0 * PI * PI);
    Ok((pref * (near.value + far.value), pref * (near.error + far.error + err)))
}

/// G_C(k_C) in eV/nm⁴ with an estimate of its absolute quadrature error.
pub fn response_with_error(k_c: f64, length: f64, model: &DielectricModel, thermal: &ThermalSpec, tol: f64) -> Result<(f64, f64)> {
    if !(k_c >= 0.0 && k_c.is_finite()) {
        return Err(CasimirError::Domain(format!("corrugation wavevector must be >= 0, got {k_c}")));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(CasimirError::Domain(format!("separation must be > 0, got {length}")));
    }
    model.validate()?;
    if model.is_transparent() {
        return Ok((0.0, 0.0));
    }
    if thermal.is_zero() {
        let scale = HBAR_C / (2.0 * length);
        let inner = 1e-2 * tol;
        let r = integrate_to_infinity_vec::<1, _>(
            |s| {
                let xi = s * scale;
                Ok([-wavevector_integral(Plate::new(model, xi)?, xi, length, k_c, inner)?.0])
            },
            0.0,
            1.0,
            QuadConfig::rel(tol),
        )?;
        let value = scale / (2.0 * PI) * r.value[0];
        return Ok((value, scale / (2.0 * PI) * r.error[0] + inner * value.abs()));
    }
    let sum = matsubara_sum::<2, _>(thermal, |_, xi| {
        let (v, e) = wavevector_integral(Plate::new(model, xi)?, xi, length, k_c, tol)?;
        Ok([-v, e])
    })?;
    let kt = thermal.thermal_energy();
    Ok((kt * sum.value[0], kt * (sum.value[1] + sum.tail)))
}

/// Spectral sensitivity G_C(k_C) (eV/nm⁴), negative for reflecting plates.
pub fn response_function(k_c: f64, length: f64, model: &DielectricModel, thermal: &ThermalSpec) -> Result<f64> {
    Ok(response_with_error(k_c, length, model, thermal, 1e-6)?.0)
}

/// Long-wavelength limit G_C(0) = ∂²(𝓔_pp/A)/∂L², from the plane-plane
/// force gradient.
pub fn pfa_response(length: f64, model: &DielectricModel, thermal: &ThermalSpec) -> Result<f64> {
    let spec = PlanePlaneSpec::symmetric(length, model.clone(), *thermal);
    Ok(per_area(&spec, Quantity::Gradient)?.0)
}

/// ρ(k_C) = G_C(k_C)/G_C(0).
pub fn rho(k_c: f64, length: f64, model: &DielectricModel, thermal: &ThermalSpec) -> Result<f64> {
    let exact = response_function(k_c, length, model, thermal)?;
    let pfa = pfa_response(length, model, thermal)?;
    crate::pfa::rho_ratio(exact, pfa)
}

/// Crest-dependent energy (eV) for a given G_C; requires θ = 0.
pub fn lateral_energy_with(spec: &CorrugationSpec, g_c: f64) -> Result<f64> {
    if spec.theta != 0.0 {
        return Err(CasimirError::Domain("lateral energy requires theta = 0".into()));
    }
    Ok(0.5 * spec.area() * g_c * spec.a1 * spec.a2 * (spec.k_c() * spec.shift).cos())
}

/// Lateral force −∂δE/∂b (eV/nm) for a given G_C; requires θ = 0.
pub fn lateral_force_with(spec: &CorrugationSpec, g_c: f64) -> Result<f64> {
    if spec.theta != 0.0 {
        return Err(CasimirError::Domain("lateral force requires theta = 0".into()));
    }
    let k = spec.k_c();
    Ok(0.5 * spec.area() * g_c * spec.a1 * spec.a2 * k * (k * spec.shift).sin())
}

fn spec_response(spec: &CorrugationSpec) -> Result<f64> {
    spec.validate()?;
    Ok(response_with_error(spec.k_c(), spec.length, &spec.model, &spec.thermal, spec.quad_tol)?.0)
}

pub fn lateral_energy(spec: &CorrugationSpec) -> Result<f64> {
    lateral_energy_with(spec, spec_response(spec)?)
}

pub fn lateral_force(spec: &CorrugationSpec) -> Result<f64> {
    lateral_force_with(spec, spec_response(spec)?)
}

/// sin(u)/u.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// d sinc/du.
pub fn sinc_prime(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        -u / 3.0
    } else {
        (u * u.cos() - u.sin()) / (u * u)
    }
}

fn torque_argument(spec: &CorrugationSpec, theta: f64) -> f64 {
    0.5 * spec.k_c() * theta * spec.ly
}

/// Energy of rotated plates, (A/2)·G_C·a1a2·cos(k_C b)·sinc(k_C θ Ly/2).
pub fn torque_energy_with(spec: &CorrugationSpec, g_c: f64) -> f64 {
    0.5 * spec.area() * g_c * spec.a1 * spec.a2 * (spec.k_c() * spec.shift).cos() * sinc(torque_argument(spec, spec.theta))
}

/// Torque −∂δE/∂θ (eV/rad).
pub fn torque_with(spec: &CorrugationSpec, g_c: f64) -> f64 {
    let du = 0.5 * spec.k_c() * spec.ly;
    -0.5 * spec.area() * g_c * spec.a1 * spec.a2 * (spec.k_c() * spec.shift).cos() * sinc_prime(torque_argument(spec, spec.theta)) * du
}

pub fn torque_energy(spec: &CorrugationSpec) -> Result<f64> {
    Ok(torque_energy_with(spec, spec_response(spec)?))
}

pub fn torque(spec: &CorrugationSpec) -> Result<f64> {
    Ok(torque_with(spec, spec_response(spec)?))
}

/// Angle of largest torque and the torque there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueMax {
    /// θ*, rad.
    pub theta: f64,
    /// τ(θ*), eV/rad.
    pub torque: f64,
}

/// Golden-section search for the maximum of `f` on [a, b].
fn maximize<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol * (a.abs() + b.abs()) {
            return Ok(0.5 * (a + b));
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    Err(CasimirError::Optimizer(format!("golden section did not close on [{a}, {b}]")))
}

/// Maximum of |τ| over θ ∈ (0, λ_C/Ly) at the spec's shift, for a given G_C.
pub fn torque_max_with(spec: &CorrugationSpec, g_c: f64) -> Result<TorqueMax> {
    let upper = spec.wavelength / spec.ly;
    let at = |theta: f64| CorrugationSpec { theta, ..spec.clone() };
    let theta = maximize(|t| torque_with(&at(t), g_c).abs(), 0.0, upper, 1e-12)?;
    Ok(TorqueMax { theta, torque: torque_with(&at(theta), g_c) })
}

pub fn torque_max(spec: &CorrugationSpec) -> Result<TorqueMax> {
    torque_max_with(spec, spec_response(spec)?)
}
