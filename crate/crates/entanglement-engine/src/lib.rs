//! Biorthogonal free-fermion entanglement: occupied-band projectors, truncated
//! correlation matrices from dense spectra or from the generalized Brillouin zone,
//! entanglement spectra, and von Neumann and Renyi-2 entropies.

mod corr;
mod effective;
mod entropy;
mod fermi;
mod profile;
mod single_cell;
mod symbol;

pub use corr::{kept_sites, truncate, CorrSource, CorrelationMatrix, Cut};
pub use effective::{effective_corr_matrix, ImKRule};
pub use entropy::{entanglement, mode_entropy, renyi2, spectrum_entropy, EntanglementResult, Renyi2, OCCUPATION_FLOOR};
pub use fermi::{occupied_projector, FermiRule, OccupiedProjector, DEFAULT_EPS_F};
pub use profile::{entanglement_eigenstate_profile, EigenstateProfile, CLUSTER_TOLERANCE};
pub use single_cell::{single_cell_approx, Offsets, SingleCellApprox};
pub use symbol::{projector_symbol, two_band_energies, EP_THRESHOLD};

pub use num_complex::Complex64 as C64;

#[derive(Debug, thiserror::Error)]
pub enum EntanglementError {
    #[error("occupied state {index} at E = {energy} is defective")]
    Defective { index: usize, energy: C64 },
    #[error("{count} states have |Re E| <= {eps_f}; choose the half_filling or negative_only rule explicitly")]
    ZeroModes { count: usize, eps_f: f64 },
    #[error("exceptional point on the grid (L = {length:?}, k = {k}): band splitting {gap}")]
    Singular { length: Option<usize>, k: f64, gap: f64 },
    #[error("invalid cut: {0}")]
    Cut(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error(transparent)]
    Spectral(#[from] siec_spectral::SpectralError),
    #[error(transparent)]
    Gbz(#[from] siec_gbz::GbzError),
    #[error(transparent)]
    Lattice(#[from] siec_lattice::LatticeError),
}
