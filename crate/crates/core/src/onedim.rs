//! Two scatterers on a line: closed-loop function, Matsubara free energy,
//! force, entropy and the S-matrix determinant identity.

use crate::error::{CasimirError, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadConfig};
use crate::thermal::{matsubara_sum, ThermalSpec};
use crate::units::HBAR_C;
use nalgebra::{Complex, Matrix2};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

type C64 = Complex<f64>;
type RealAmplitudes = Arc<dyn Fn(f64) -> (C64, C64) + Send + Sync>;

/// A partially reflecting mirror on a line.
#[derive(Clone)]
pub struct Mirror1D {
    reflection: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    real: Option<RealAmplitudes>,
    constant: Option<f64>,
    /// Position in nm.
    pub position: f64,
}

impl fmt::Debug for Mirror1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mirror1D")
            .field("constant", &self.constant)
            .field("position", &self.position)
            .finish_non_exhaustive()
    }
}

impl Mirror1D {
    /// Frequency-independent reflection amplitude, `|r| ≤ 1`.
    pub fn constant(r: f64) -> Result<Self> {
        if !(r.abs() <= 1.0) {
            return Err(CasimirError::Domain(format!("|r| must be <= 1, got {r}")));
        }
        Ok(Self {
            reflection: Arc::new(move |_| r),
            real: None,
            constant: Some(r),
            position: 0.0,
        })
    }

    pub fn perfect() -> Self {
        Self::constant(1.0).unwrap()
    }

    /// Reflection amplitude given as a function of imaginary frequency ξ (eV).
    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(r: F) -> Self {
        Self { reflection: Arc::new(r), real: None, constant: None, position: 0.0 }
    }

    /// Attaches complex (r, t) amplitudes at real frequency ω (eV).
    pub fn with_real_amplitudes<F: Fn(f64) -> (C64, C64) + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.real = Some(Arc::new(f));
        self
    }

    pub fn at(mut self, position: f64) -> Self {
        self.position = position;
        self
    }

    pub fn reflection(&self, xi: f64) -> Result<f64> {
        let r = (self.reflection)(xi);
        if !(r.abs() <= 1.0) {
            return Err(CasimirError::Domain(format!("|r(i xi)| = {} exceeds 1 at xi = {xi}", r.abs())));
        }
        Ok(r)
    }
}

fn check_length(length: f64) -> Result<()> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(CasimirError::Domain(format!("mirror separation must be positive, got {length}")));
    }
    Ok(())
}

/// d(iξ) = 1 − r₁r₂ e^{−2ξL/ħc}.
pub fn loop_function_1d(r1: f64, r2: f64, xi: f64, length: f64) -> f64 {
    1.0 - r1 * r2 * (-2.0 * xi * length / HBAR_C).exp()
}

fn round_trip(m1: &Mirror1D, m2: &Mirror1D, xi: f64, length: f64) -> Result<f64> {
    Ok(m1.reflection(xi)? * m2.reflection(xi)? * (-2.0 * xi * length / HBAR_C).exp())
}

/// Casimir free energy (eV) of the cavity at separation `length` (nm).
pub fn free_energy_1d(m1: &Mirror1D, m2: &Mirror1D, length: f64, thermal: &ThermalSpec) -> Result<f64> {
    check_length(length)?;
    thermal.validate()?;
    if thermal.is_zero() {
        let scale = HBAR_C / (2.0 * length);
        let mut failure = None;
        let r = integrate_to_infinity(
            |v| match round_trip(m1, m2, v * scale, length) {
                Ok(u) => (-u).ln_1p(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            1.0,
            QuadConfig::rel(1e-10),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        return Ok(HBAR_C / (4.0 * PI * length) * r.value);
    }
    let s = matsubara_sum::<1, _>(thermal, |_, xi| {
        let u = round_trip(m1, m2, xi, length)?;
        if u >= 1.0 {
            // ln(2ξL/ħc) at ξ → 0: only the force is finite
            return Err(CasimirError::Domain(
                "free energy diverges for r₁r₂ = 1 at zero frequency; use force_1d".into(),
            ));
        }
        Ok([(-u).ln_1p()])
    })?;
    Ok(thermal.thermal_energy() * s.value[0])
}

/// Casimir force −∂𝓕/∂L (eV/nm) from the analytic L-derivative of ln d.
pub fn force_1d(m1: &Mirror1D, m2: &Mirror1D, length: f64, thermal: &ThermalSpec) -> Result<f64> {
    check_length(length)?;
    thermal.validate()?;
    if thermal.is_zero() {
        let scale = HBAR_C / (2.0 * length);
        let mut failure = None;
        let r = integrate_to_infinity(
            |v| match round_trip(m1, m2, v * scale, length) {
                Ok(u) => v * u / (1.0 - u),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            1.0,
            QuadConfig::rel(1e-10),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        return Ok(-HBAR_C / (4.0 * PI * length * length) * r.value);
    }
    let s = matsubara_sum::<1, _>(thermal, |_, xi| {
        let u = round_trip(m1, m2, xi, length)?;
        if xi == 0.0 {
            // 2ξ/ħc·u/(1 − u) → 1/L when r₁r₂ = 1
            return Ok([if u >= 1.0 { 1.0 / length } else { 0.0 }]);
        }
        Ok([2.0 * xi / HBAR_C * u / (1.0 - u)])
    })?;
    Ok(-thermal.thermal_energy() * s.value[0])
}

/// Force from the difference of radiation pressures at real frequencies,
/// for a lossless cavity with constant round-trip amplitude `r = r₁r₂`.
///
/// The oscillating vacuum integrand is regularized with e^{−ηω} and
/// Richardson-extrapolated to η → 0.
pub fn force_1d_radiation_pressure(r: f64, length: f64, thermal: &ThermalSpec) -> Result<f64> {
    check_length(length)?;
    if !(r.abs() < 1.0) {
        return Err(CasimirError::Domain("radiation-pressure form requires |r| < 1".into()));
    }
    let period = PI * HBAR_C / length;
    let g_minus_one = |w: f64| {
        let phase = 2.0 * w * length / HBAR_C;
        let z = C64::from_polar(r, phase);
        (1.0 - r * r) / (C64::new(1.0, 0.0) - z).norm_sqr() - 1.0
    };
    let regularized = |eta: f64| -> Result<f64> {
        // integrate period by period until the regulator has killed the integrand
        let w_max = 60.0 / eta;
        let panels = (w_max / period).ceil() as usize;
        let mut total = 0.0;
        for j in 0..panels {
            let (a, b) = (j as f64 * period, (j + 1) as f64 * period);
            let v = integrate(
                |w| {
                    if w == 0.0 {
                        return 0.0;
                    }
                    thermal.planck_occupation(w) * w / HBAR_C * g_minus_one(w) * (-eta * w).exp()
                },
                a,
                b,
                QuadConfig { rel_tol: 1e-12, abs_tol: 1e-300, max_intervals: 200 },
            )?;
            total += v.value;
        }
        Ok(total / PI)
    };
    // expansion is even in η: Richardson on η²
    let eta0 = 2.0 / period;
    let f1 = regularized(eta0)?;
    let f2 = regularized(eta0 / 2.0)?;
    let f3 = regularized(eta0 / 4.0)?;
    let r12 = (4.0 * f2 - f1) / 3.0;
    let r23 = (4.0 * f3 - f2) / 3.0;
    Ok((16.0 * r23 - r12) / 15.0)
}

/// Casimir entropy −∂𝓕/∂T (eV/K) by a central difference with one
/// Richardson step.
pub fn entropy_1d(m1: &Mirror1D, m2: &Mirror1D, length: f64, thermal: &ThermalSpec) -> Result<f64> {
    if !(thermal.temperature > 0.0) {
        return Err(CasimirError::Domain("entropy requires T > 0".into()));
    }
    let free = |t: f64| free_energy_1d(m1, m2, length, &thermal.with_temperature(t));
    central_entropy(thermal.temperature, free)
}

pub(crate) fn central_entropy<F: Fn(f64) -> Result<f64>>(temperature: f64, free: F) -> Result<f64> {
    let h = 1e-3 * temperature;
    if !(h > 0.0 && temperature - h > 0.0 && (temperature + h).is_finite()) {
        return Err(CasimirError::Numeric(format!("entropy step underflow at T = {temperature}")));
    }
    let d = |h: f64| -> Result<f64> { Ok(-(free(temperature + h)? - free(temperature - h)?) / (2.0 * h)) };
    let coarse = d(h)?;
    let fine = d(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn scattering_matrix(r: C64, t: C64, omega: f64, q: f64) -> Matrix2<C64> {
    let ph = C64::from_polar(1.0, 2.0 * omega * q / HBAR_C);
    Matrix2::new(t, r / ph, r * ph, t)
}

fn cavity_matrix(r1: C64, t1: C64, r2: C64, t2: C64, omega: f64, length: f64) -> (Matrix2<C64>, C64) {
    let e = C64::from_polar(1.0, omega * length / HBAR_C);
    let d = C64::new(1.0, 0.0) - r1 * r2 * e * e;
    let s = Matrix2::new(
        t1 * t2,
        d * r2 / e + t2 * t2 * r1 * e,
        d * r1 / e + t1 * t1 * r2 * e,
        t1 * t2,
    ) / d;
    (s, d)
}

/// Largest residual of ln det S₁₂ − ln det S₁ − ln det S₂ − ln(d*/d) over the
/// real frequencies `omegas` (eV).
pub fn det_identity_check(m1: &Mirror1D, m2: &Mirror1D, omegas: &[f64]) -> Result<f64> {
    let (Some(a1), Some(a2)) = (&m1.real, &m2.real) else {
        return Err(CasimirError::Domain("mirrors need real-frequency amplitudes".into()));
    };
    let length = m2.position - m1.position;
    let mut worst = 0.0f64;
    for &w in omegas {
        let (r1, t1) = a1(w);
        let (r2, t2) = a2(w);
        for (r, t) in [(r1, t1), (r2, t2)] {
            let unit = (r.norm_sqr() + t.norm_sqr() - 1.0).abs();
            let ortho = (r * t.conj() + r.conj() * t).norm();
            if unit > 1e-12 || ortho > 1e-12 {
                return Err(CasimirError::Domain(format!("mirror is not unitary at omega = {w}")));
            }
        }
        let s1 = scattering_matrix(r1, t1, w, m1.position);
        let s2 = scattering_matrix(r2, t2, w, m2.position);
        let (s12, d) = cavity_matrix(r1, t1, r2, t2, w, length);
        let z = s12.determinant() / (s1.determinant() * s2.determinant() * (d.conj() / d));
        worst = worst.max(z.ln().norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_function_values() {
        assert_eq!(loop_function_1d(1.0, 1.0, 0.0, 100.0), 0.0);
        assert_eq!(loop_function_1d(0.0, 0.7, 1.0, 100.0), 1.0);
        let length = 100.0;
        let xi = 4f64.ln() * HBAR_C / (2.0 * length);
        assert!((loop_function_1d(1.0, 1.0, xi, length) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn transparent_mirrors_give_zero() {
        let m = Mirror1D::constant(0.0).unwrap();
        for t in [ThermalSpec::zero(), ThermalSpec::new(300.0).unwrap()] {
            assert_eq!(free_energy_1d(&m, &m, 500.0, &t).unwrap(), 0.0);
            assert_eq!(force_1d(&m, &m, 500.0, &t).unwrap(), 0.0);
        }
        assert_eq!(entropy_1d(&m, &m, 500.0, &ThermalSpec::new(300.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn perfect_mirrors_zero_temperature() {
        let m = Mirror1D::perfect();
        let e = free_energy_1d(&m, &m, 1000.0, &ThermalSpec::zero()).unwrap();
        let exact = -PI * HBAR_C / (24.0 * 1000.0);
        assert!((e / exact - 1.0).abs() < 1e-9, "{e} vs {exact}");
        assert!((e + 0.025_830_04).abs() < 1e-8);
        let f = force_1d(&m, &m, 1000.0, &ThermalSpec::zero()).unwrap();
        assert!((f / (exact / 1000.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn perfect_mirrors_at_finite_temperature() {
        let m = Mirror1D::perfect();
        let th = ThermalSpec::new(300.0).unwrap();
        assert!(matches!(free_energy_1d(&m, &m, 100.0, &th), Err(CasimirError::Domain(_))));
        // classical limit: only the static term survives
        let l = 1e5;
        let f = force_1d(&m, &m, l, &th).unwrap();
        assert!((f / (-th.thermal_energy() / (2.0 * l)) - 1.0).abs() < 1e-12, "{f}");
        let cold = force_1d(&m, &m, 100.0, &ThermalSpec::new(1.0).unwrap()).unwrap();
        let zero = force_1d(&m, &m, 100.0, &ThermalSpec::zero()).unwrap();
        assert!((cold / zero - 1.0).abs() < 1e-3);
    }

    #[test]
    fn invalid_inputs() {
        assert!(Mirror1D::constant(1.5).is_err());
        let m = Mirror1D::perfect();
        assert!(free_energy_1d(&m, &m, 0.0, &ThermalSpec::zero()).is_err());
        assert!(entropy_1d(&m, &m, 100.0, &ThermalSpec::zero()).is_err());
        let bad = Mirror1D::from_fn(|_| 2.0);
        assert!(free_energy_1d(&bad, &bad, 100.0, &ThermalSpec::zero()).is_err());
    }

    #[test]
    fn det_identity_simple() {
        let free = Mirror1D::constant(0.0)
            .unwrap()
            .with_real_amplitudes(|_| (C64::new(0.0, 0.0), C64::new(1.0, 0.0)));
        let far = free.clone().at(300.0);
        assert!(det_identity_check(&free, &far, &[0.5, 1.0]).unwrap() < 1e-14);

        let m = Mirror1D::constant(0.6)
            .unwrap()
            .with_real_amplitudes(|_| (C64::new(0.0, 0.6), C64::new(0.8, 0.0)));
        let m2 = m.clone().at(250.0);
        assert!(det_identity_check(&m, &m2, &[1.3]).unwrap() < 1e-12);
    }

    #[test]
    fn det_identity_rejects_lossy_mirror() {
        let m = Mirror1D::constant(0.5)
            .unwrap()
            .with_real_amplitudes(|_| (C64::new(0.5, 0.0), C64::new(0.5, 0.0)));
        assert!(det_identity_check(&m, &m.clone().at(10.0), &[1.0]).is_err());
        let plain = Mirror1D::perfect();
        assert!(det_identity_check(&plain, &plain, &[1.0]).is_err());
    }
}
