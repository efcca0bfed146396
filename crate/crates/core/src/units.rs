//! Physical constants and unit conventions.
//!
//! Lengths are in nanometres, energies and (imaginary) frequencies in eV,
//! temperatures in kelvin. Forces come out in eV/nm.

/// ħc in eV·nm.
pub const HBAR_C: f64 = 197.326_980_4;
/// Boltzmann constant in eV/K.
pub const K_B: f64 = 8.617_333_262e-5;
/// 1 eV in joule.
pub const EV_TO_J: f64 = 1.602_176_634e-19;
/// 1 eV/nm in newton.
pub const EV_PER_NM_TO_N: f64 = 1.602_176_634e-10;

/// Wavelength (nm) corresponding to an angular-frequency energy `omega` (eV): 2πħc/ω.
pub fn wavelength_from_energy(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * HBAR_C / omega
}

/// Inverse of [`wavelength_from_energy`].
pub fn energy_from_wavelength(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * HBAR_C / lambda
}

/// Thermal wavelength ħc/(k_B T) in nm.
pub fn thermal_wavelength(temperature: f64) -> f64 {
    HBAR_C / (K_B * temperature)
}
