//! Mirror dielectric functions evaluated at imaginary frequency ε(iξ).
//!
//! Frequencies are energies in eV. The interband background of the metallic
//! models is fixed to 1; interband physics enters through
//! [`DielectricModel::DrudeLorentz`] or a table.

use crate::error::{CasimirError, Result};
use crate::units::wavelength_from_energy;
use std::io::BufRead;

/// Low-frequency extension used below the first node of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeTail {
    pub omega_p: f64,
    pub gamma: f64,
}

/// Tabulated ε(iξ) with log-ξ interpolation of ln(ε − 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    xi: Vec<f64>,
    eps: Vec<f64>,
    tail: Option<DrudeTail>,
}

impl Table {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(CasimirError::InvalidModel("table needs at least two points".into()));
        }
        for (i, &(x, e)) in points.iter().enumerate() {
            if !(x > 0.0 && x.is_finite()) {
                return Err(CasimirError::InvalidModel(format!("row {i}: xi must be positive, got {x}")));
            }
            if !(e >= 1.0 && e.is_finite()) {
                return Err(CasimirError::InvalidModel(format!("row {i}: epsilon must be >= 1, got {e}")));
            }
            if i > 0 {
                let (xp, ep) = points[i - 1];
                if x <= xp {
                    return Err(CasimirError::InvalidModel(format!("row {i}: xi not strictly increasing")));
                }
                if e > ep {
                    return Err(CasimirError::InvalidModel(format!("row {i}: epsilon increases with xi")));
                }
            }
        }
        let (xi, eps) = points.into_iter().unzip();
        Ok(Self { xi, eps, tail: None })
    }

    /// Enables a Drude extension for ξ below the first node.
    pub fn with_drude_tail(mut self, omega_p: f64, gamma: f64) -> Result<Self> {
        if !(omega_p > 0.0 && gamma > 0.0) {
            return Err(CasimirError::InvalidModel("Drude tail needs omega_p > 0 and gamma > 0".into()));
        }
        self.tail = Some(DrudeTail { omega_p, gamma });
        Ok(self)
    }

    pub fn tail(&self) -> Option<DrudeTail> {
        self.tail
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xi[0], *self.xi.last().unwrap())
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xi.iter().copied().zip(self.eps.iter().copied())
    }

    fn eval(&self, xi: f64) -> Result<f64> {
        let (min, max) = self.range();
        if xi < min {
            return match self.tail {
                Some(t) if xi > 0.0 => Ok(1.0 + t.omega_p * t.omega_p / (xi * (xi + t.gamma))),
                Some(_) => Ok(f64::INFINITY),
                None => Err(CasimirError::OutOfTable { xi, min, max }),
            };
        }
        if xi > max {
            return Err(CasimirError::OutOfTable { xi, min, max });
        }
        let j = self.xi.partition_point(|&x| x <= xi);
        if j == self.xi.len() {
            return Ok(*self.eps.last().unwrap());
        }
        let i = j - 1;
        let (x0, x1) = (self.xi[i], self.xi[i + 1]);
        let (e0, e1) = (self.eps[i], self.eps[i + 1]);
        if xi == x0 {
            return Ok(e0);
        }
        let t = (xi / x0).ln() / (x1 / x0).ln();
        if e0 > 1.0 && e1 > 1.0 {
            let l = (1.0 - t) * (e0 - 1.0).ln() + t * (e1 - 1.0).ln();
            Ok(1.0 + l.exp())
        } else {
            Ok((1.0 - t) * e0 + t * e1)
        }
    }
}

/// Optical response of a mirror material.
#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    PerfectMirror,
    /// Lossless plasma model, plasma frequency in eV.
    Plasma { omega_p: f64 },
    /// Drude model with relaxation γ > 0 (eV).
    Drude { omega_p: f64, gamma: f64 },
    /// ε(iξ) = ε∞ + (ε0 − ε∞) ξ0² / (ξ² + ξ0²).
    DrudeLorentz { eps0: f64, eps_inf: f64, xi0: f64 },
    Tabulated(Table),
}

/// Static conductivity σ0 = ω_P²/γ, or the lossless infinite limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conductivity {
    Finite(f64),
    Infinite,
}

impl DielectricModel {
    pub fn plasma(omega_p: f64) -> Result<Self> {
        let m = Self::Plasma { omega_p };
        m.validate()?;
        Ok(m)
    }

    /// Plasma model from its plasma wavelength in nm.
    pub fn plasma_from_wavelength(lambda_p: f64) -> Result<Self> {
        Self::plasma(crate::units::energy_from_wavelength(lambda_p))
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        let m = Self::Drude { omega_p, gamma };
        m.validate()?;
        Ok(m)
    }

    /// Drude model from λ_P and λ_γ (both nm).
    pub fn drude_from_wavelengths(lambda_p: f64, lambda_gamma: f64) -> Result<Self> {
        Self::drude(
            crate::units::energy_from_wavelength(lambda_p),
            crate::units::energy_from_wavelength(lambda_gamma),
        )
    }

    pub fn drude_lorentz(eps0: f64, eps_inf: f64, xi0: f64) -> Result<Self> {
        let m = Self::DrudeLorentz { eps0, eps_inf, xi0 };
        m.validate()?;
        Ok(m)
    }

    /// Intrinsic silicon.
    pub fn silicon() -> Self {
        Self::DrudeLorentz { eps0: 11.87, eps_inf: 1.035, xi0: 4.34 }
    }

    /// Vacuum (ε = 1), useful as a non-reflecting mirror.
    pub fn vacuum() -> Self {
        Self::DrudeLorentz { eps0: 1.0, eps_inf: 1.0, xi0: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(CasimirError::InvalidModel(s));
        match *self {
            Self::PerfectMirror | Self::Tabulated(_) => Ok(()),
            Self::Plasma { omega_p } => {
                if omega_p > 0.0 && omega_p.is_finite() {
                    Ok(())
                } else {
                    bad(format!("plasma frequency must be positive, got {omega_p}"))
                }
            }
            Self::Drude { omega_p, gamma } => {
                if !(omega_p > 0.0 && omega_p.is_finite()) {
                    bad(format!("plasma frequency must be positive, got {omega_p}"))
                } else if !(gamma > 0.0 && gamma.is_finite()) {
                    bad(format!("Drude relaxation must be positive (use the plasma model for gamma = 0), got {gamma}"))
                } else {
                    Ok(())
                }
            }
            Self::DrudeLorentz { eps0, eps_inf, xi0 } => {
                // eps0 == eps_inf == 1 is admitted as the vacuum placeholder
                let vacuum = eps0 == 1.0 && eps_inf == 1.0;
                if !(vacuum || eps0 > eps_inf) || eps_inf < 1.0 {
                    bad(format!("Drude-Lorentz needs eps0 > eps_inf >= 1, got {eps0}, {eps_inf}"))
                } else if !(xi0 > 0.0) {
                    bad(format!("Drude-Lorentz resonance must be positive, got {xi0}"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// ε(iξ). Returns `+∞` for perfect mirrors and for conductors at ξ = 0.
    pub fn eval_epsilon(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0) {
            return Err(CasimirError::Domain(format!("imaginary frequency must be >= 0, got {xi}")));
        }
        Ok(match self {
            Self::PerfectMirror => f64::INFINITY,
            Self::Plasma { omega_p } => {
                if xi == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 + (omega_p / xi).powi(2)
                }
            }
            Self::Drude { omega_p, gamma } => {
                if xi == 0.0 {
                    f64::INFINITY
                } else if xi.is_infinite() {
                    1.0
                } else {
                    1.0 + omega_p * omega_p / (xi * (xi + gamma))
                }
            }
            Self::DrudeLorentz { eps0, eps_inf, xi0 } => {
                if xi.is_infinite() {
                    *eps_inf
                } else {
                    eps_inf + (eps0 - eps_inf) * xi0 * xi0 / (xi * xi + xi0 * xi0)
                }
            }
            Self::Tabulated(t) => t.eval(xi)?,
        })
    }

    pub fn static_conductivity(&self) -> Result<Conductivity> {
        match *self {
            Self::Drude { omega_p, gamma } => Ok(Conductivity::Finite(omega_p * omega_p / gamma)),
            Self::Plasma { .. } | Self::PerfectMirror => Ok(Conductivity::Infinite),
            _ => Err(CasimirError::NotApplicable(
                "static conductivity is defined for perfect, plasma and Drude mirrors only".into(),
            )),
        }
    }

    /// Plasma wavelength 2πħc/ω_P (nm) for metallic models.
    pub fn plasma_wavelength(&self) -> Option<f64> {
        match *self {
            Self::Plasma { omega_p } | Self::Drude { omega_p, .. } => Some(wavelength_from_energy(omega_p)),
            _ => None,
        }
    }

    /// True when ε(iξ) = 1 identically (no reflection at all).
    pub fn is_transparent(&self) -> bool {
        matches!(*self, Self::DrudeLorentz { eps0, eps_inf, .. } if eps0 == 1.0 && eps_inf == 1.0)
    }
}

/// Reads a two-column table (ξ in eV, ε) with `#` comments.
pub fn load_table<R: BufRead>(source: R) -> Result<DielectricModel> {
    let mut points = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line = line.map_err(|e| CasimirError::Load { line: n + 1, msg: e.to_string() })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let cols: Vec<&str> = content.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        if cols.len() != 2 {
            return Err(CasimirError::Load { line: n + 1, msg: format!("expected two columns, found {}", cols.len()) });
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CasimirError::Load { line: n + 1, msg: format!("cannot parse number '{s}'") })
        };
        points.push((parse(cols[0])?, parse(cols[1])?));
    }
    Table::new(points)
        .map(DielectricModel::Tabulated)
        .map_err(|e| CasimirError::Load { line: 0, msg: e.to_string() })
}
