//! Dense non-Hermitian eigendecomposition with biorthogonal left/right pairing.
//!
//! Left eigenvectors come from a second decomposition of `M†`; the two spectra are
//! paired by a global minimum-cost assignment on `|E_i − conj(μ_j)|`.

mod assignment;
mod eigen;

pub use assignment::min_cost_assignment;
pub use eigen::{eig_biorthogonal, eigenvalues, EigenSystem, DEFECTIVE_THRESHOLD, DEGENERACY_TOLERANCE};

pub use num_complex::Complex64 as C64;

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("empty spectrum")]
    Empty,
    #[error("inconsistent eigensystem: {0}")]
    Shape(String),
}

/// Per-state phase rigidity `r_n = |⟨ψᴸ_n|ψᴿ_n⟩| / (‖ψᴸ_n‖ ‖ψᴿ_n‖)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityReport {
    pub per_state: Vec<f64>,
    pub min_r: f64,
    pub argmin: usize,
}

pub fn phase_rigidity(eigsys: &EigenSystem) -> RigidityReport {
    let per_state = eigsys.rigidities().to_vec();
    let (argmin, min_r) =
        per_state
            .iter()
            .cloned()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, r)| if r < best.1 { (i, r) } else { best });
    RigidityReport { per_state, min_r, argmin }
}

/// `min_n |E_n|`.
pub fn spectral_gap(eigsys: &EigenSystem) -> Result<f64, SpectralError> {
    gap_of(eigsys.energies())
}

pub fn gap_of(energies: &[C64]) -> Result<f64, SpectralError> {
    energies.iter().map(|e| e.norm()).reduce(f64::min).ok_or(SpectralError::Empty)
}
