//! Closed forms for a small sphere far from the plate. All take the
//! center-to-plate distance, where the dipole approximation is written.

use crate::units::{HBAR_C, K_B};

fn csch2_coth(nu: f64) -> (f64, f64) {
    if nu > 350.0 {
        return (0.0, 1.0);
    }
    let e = (-2.0 * nu).exp();
    let d = -(-2.0 * nu).exp_m1();
    (4.0 * e / (d * d), (1.0 + e) / d)
}

/// φ(ν) = (ν²coshν + νsinhν + coshν sinh²ν)/(2sinh³ν).
pub fn phi(nu: f64) -> f64 {
    let (h, c) = csch2_coth(nu);
    0.5 * (nu * nu * c * h + nu * h + c)
}

/// φ′(ν) = −½ν²csch²ν(csch²ν + 2coth²ν).
pub fn phi_prime(nu: f64) -> f64 {
    let (h, c) = csch2_coth(nu);
    -0.5 * nu * nu * h * (h + 2.0 * c * c)
}

fn thermal_wavelength(temperature: f64) -> f64 {
    HBAR_C / (K_B * temperature)
}

/// ℓ = 1 perfect-mirror free energy −(3ħcR³/(4λ_T d³))φ(2πd/λ_T) in eV.
/// At T = 0 this is the retarded limit −9ħcR³/(16πd⁴).
pub fn analytic_l1_perf(distance: f64, radius: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return -9.0 * HBAR_C * radius.powi(3) / (16.0 * std::f64::consts::PI * distance.powi(4));
    }
    let lt = thermal_wavelength(temperature);
    let nu = 2.0 * std::f64::consts::PI * distance / lt;
    -3.0 * HBAR_C * radius.powi(3) / (4.0 * lt * distance.powi(3)) * phi(nu)
}

/// ℓ = 1 perfect-mirror entropy (3k_BR³/(4d³))(φ + νφ′) in eV/K.
pub fn entropy_l1_perf(distance: f64, radius: f64, temperature: f64) -> f64 {
    let nu = 2.0 * std::f64::consts::PI * distance / thermal_wavelength(temperature);
    3.0 * K_B * radius.powi(3) / (4.0 * distance.powi(3)) * (phi(nu) + nu * phi_prime(nu))
}

/// 1 + 1/α² − coth(α)/α, which runs from 2/3 (α → 0) to 1 (α → ∞).
pub fn plasma_bracket(alpha: f64) -> f64 {
    if alpha < 0.05 {
        let a2 = alpha * alpha;
        return 2.0 / 3.0 + a2 / 45.0 - 2.0 * a2 * a2 / 945.0;
    }
    let (_, c) = csch2_coth(alpha);
    1.0 + 1.0 / (alpha * alpha) - c / alpha
}

/// High-temperature plasma free energy −(3ħcR³/(8λ_T d³))(1 + 1/α² − cothα/α),
/// α = 2πR/λ_P.
pub fn plasma_high_t(distance: f64, radius: f64, plasma_wavelength: f64, temperature: f64) -> f64 {
    let alpha = 2.0 * std::f64::consts::PI * radius / plasma_wavelength;
    -3.0 * HBAR_C * radius.powi(3) / (8.0 * thermal_wavelength(temperature) * distance.powi(3)) * plasma_bracket(alpha)
}

/// High-temperature Drude free energy −ħcR³/(4λ_T d³).
pub fn drude_high_t(distance: f64, radius: f64, temperature: f64) -> f64 {
    -HBAR_C * radius.powi(3) / (4.0 * thermal_wavelength(temperature) * distance.powi(3))
}
