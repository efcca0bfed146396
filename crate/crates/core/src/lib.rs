//! Casimir free energies, forces, force gradients and entropies between
//! mirrors, computed in the scattering approach.
//!
//! Units: nm for lengths, eV for energies and imaginary frequencies, K for
//! temperatures. See [`units`].

pub mod corrugation;
pub mod error;
pub mod materials;
pub mod onedim;
pub mod pfa;
pub mod planeplane;
pub mod planesphere;
pub mod quad;
pub mod result;
pub mod special;
pub mod specular;
pub mod thermal;
pub mod units;

pub use error::{CasimirError, Result};
pub use materials::DielectricModel;
pub use result::{CasimirResult, Diagnostics};
pub use thermal::ThermalSpec;
