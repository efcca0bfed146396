//! Temperature specification and the Matsubara summation engine.

use crate::error::{CasimirError, Result};
use crate::units::K_B;
use rayon::prelude::*;

/// Temperature and truncation policy for Matsubara sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    /// Kelvin, ≥ 0. Zero selects the imaginary-frequency integral.
    pub temperature: f64,
    /// Stop once three consecutive terms fall below `tolerance·|partial sum|`.
    pub tolerance: f64,
    pub max_terms: usize,
}

impl Default for ThermalSpec {
    fn default() -> Self {
        Self { temperature: 0.0, tolerance: 1e-10, max_terms: 20_000_000 }
    }
}

impl ThermalSpec {
    pub fn new(temperature: f64) -> Result<Self> {
        let s = Self { temperature, ..Self::default() };
        s.validate()?;
        Ok(s)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(CasimirError::Domain(format!("temperature must be >= 0, got {}", self.temperature)));
        }
        if !(self.tolerance > 0.0) {
            return Err(CasimirError::Domain("Matsubara tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.temperature == 0.0
    }

    /// k_B T in eV.
    pub fn thermal_energy(&self) -> f64 {
        K_B * self.temperature
    }

    /// ξ_n = 2π n k_B T (as an energy, eV).
    pub fn matsubara_xi(&self, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * n as f64 * self.thermal_energy()
    }

    /// Mean photon number per mode including the vacuum ½, N = 1/(2 tanh(ω/2k_BT)).
    pub fn planck_occupation(&self, omega: f64) -> f64 {
        if self.is_zero() {
            return 0.5;
        }
        0.5 / (omega / (2.0 * self.thermal_energy())).tanh()
    }
}

/// Outcome of a primed Matsubara sum Σ'_n f(ξ_n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSum<const N: usize> {
    pub value: [f64; N],
    pub terms: usize,
    /// Geometric-series bound on the neglected tail of component 0.
    pub tail: f64,
}

/// Evaluates Σ'_n f(ξ_n) (n = 0 weighted ½) for all `N` components at once.
///
/// Terms are computed in parallel chunks and reduced in ascending `n`, so the
/// result is independent of the number of worker threads.
pub fn matsubara_sum<const N: usize, F>(spec: &ThermalSpec, f: F) -> Result<MatsubaraSum<N>>
where
    F: Fn(usize, f64) -> Result<[f64; N]> + Sync,
{
    spec.validate()?;
    if spec.is_zero() {
        return Err(CasimirError::Domain("Matsubara sum requires T > 0".into()));
    }
    let mut sum = [0.0; N];
    let mut quiet = 0usize;
    let mut n = 0usize;
    let mut chunk = 8usize;
    let mut last = [0.0f64; 2];
    while n < spec.max_terms {
        let end = (n + chunk).min(spec.max_terms);
        let terms: Vec<Result<[f64; N]>> =
            (n..end).into_par_iter().map(|i| f(i, spec.matsubara_xi(i))).collect();
        for (offset, t) in terms.into_iter().enumerate() {
            let i = n + offset;
            let mut t = t?;
            if i == 0 {
                t.iter_mut().for_each(|v| *v *= 0.5);
            }
            let mut small = true;
            for c in 0..N {
                sum[c] += t[c];
                if !(t[c].abs() <= spec.tolerance * sum[c].abs()) {
                    small = false;
                }
            }
            last = [last[1], t[0]];
            quiet = if small && i > 0 { quiet + 1 } else { 0 };
            if quiet >= 3 {
                let q = if last[0] != 0.0 { (last[1] / last[0]).abs() } else { 0.0 };
                let tail = if q < 1.0 { last[1].abs() * q / (1.0 - q) } else { last[1].abs() };
                return Ok(MatsubaraSum { value: sum, terms: i + 1, tail });
            }
        }
        n = end;
        chunk = (chunk * 2).min(4096);
    }
    Err(CasimirError::MatsubaraNotConverged { terms: spec.max_terms, tail: last[1].abs() })
}
