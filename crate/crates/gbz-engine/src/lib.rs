//! Generalized Brillouin zones: characteristic-polynomial roots, the single-chain
//! GBZ, the closed-form size-dependent GBZ of weakly coupled antagonistic chains,
//! and numerical extraction from open-boundary spectra.

mod matching;
mod numeric;
mod poly;
mod roots;
mod scale;

pub use matching::{boundary_match_radius, dispersion_energy, matching_rhs, BoundaryMatch};
pub use numeric::{bloch_spectrum_on, gbz_from_spectrum, RootRule};
pub use poly::{laurent_det, polynomial_roots, Laurent};
pub use roots::{char_poly_roots, characteristic_laurent, normalized_residual, sort_roots, RootSet};
pub use scale::{
    critical_params, delta_k, k_grid, scale_gbz, standard_gbz, standard_radius, Branch, CriticalParams, GbzPoint,
    GbzResult, Regime,
};

pub use num_complex::Complex64 as C64;

#[derive(Debug, thiserror::Error)]
pub enum GbzError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Lattice(#[from] siec_lattice::LatticeError),
}
