/// Convergence information attached to every [`CasimirResult`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// Number of Matsubara terms summed; 0 on the T = 0 path.
    pub matsubara_terms: usize,
    /// Bound on the neglected Matsubara tail (same units as the energy).
    pub tail_estimate: f64,
    /// Accumulated absolute quadrature error estimate.
    pub quadrature_error: f64,
    /// Multipole cutoff used, if any.
    pub ell_max: Option<usize>,
    /// Relative size of the last-ℓ contribution, if a multipole basis is used.
    pub ell_max_residual: Option<f64>,
    /// Relative size of the last azimuthal block kept.
    pub m_tail: Option<f64>,
}

impl Diagnostics {
    pub(crate) fn merge(&mut self, other: &Diagnostics) {
        self.matsubara_terms = self.matsubara_terms.max(other.matsubara_terms);
        self.tail_estimate += other.tail_estimate;
        self.quadrature_error += other.quadrature_error;
        self.ell_max = self.ell_max.or(other.ell_max);
        self.ell_max_residual = max_opt(self.ell_max_residual, other.ell_max_residual);
        self.m_tail = max_opt(self.m_tail, other.m_tail);
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Free energy (eV), force (eV/nm), gradient (eV/nm²) and entropy (eV/K).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirResult {
    pub free_energy: f64,
    pub force: f64,
    pub gradient: f64,
    /// `None` when the entropy was not requested or T = 0.
    pub entropy: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl CasimirResult {
    /// All quantities multiplied by `factor`; used to go between totals and
    /// per-area values.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut d = self.diagnostics;
        d.tail_estimate *= factor.abs();
        d.quadrature_error *= factor.abs();
        Self {
            free_energy: self.free_energy * factor,
            force: self.force * factor,
            gradient: self.gradient * factor,
            entropy: self.entropy.map(|s| s * factor),
            diagnostics: d,
        }
    }
}
