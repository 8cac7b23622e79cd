//! Experiment drivers: entanglement dip scans over system size, dip-depth sweeps,
//! logarithmic baseline fits, generalized-model scans with GBZ snapshots, and the
//! doubled-Hamiltonian measurement identity.

mod baseline;
mod doubled;
mod general;
mod record;
mod scan;
mod stats;
mod sweep;

pub use baseline::{baseline_entropy, log_scaling_fit, Baseline, BaselineConvention, LogFit, MIN_BASELINE_LENGTH};
pub use doubled::{
    build_doubled, measurement_identity_check, DoubledSystem, LambdaEntry, MeasurementCheck, LAMBDA_FLOOR,
};
pub use general::{
    gap_closing_size, gbz_spectrum_distance, general_model_dips, GbzSnapshot, GeneralDips, ZERO_MODE_TOLERANCE,
};
pub use record::{determinism_tag, ScanRecord};
pub use scan::{
    dip_scan, scan_point, CorrPath, CutRule, DipScan, ModelSpec, ScanConfig, ScanPoint, IM_RESIDUAL_WARNING,
    RIGIDITY_WARNING,
};
pub use stats::{dip_depth, hausdorff, jump_kink, linear_fit, median, Fit, Parity};
pub use sweep::{param_sweep, sweep_hoppings, thread_pool, SweepCell, SweepConfig, THREADS_ENV};

pub use num_complex::Complex64 as C64;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("need at least {needed} points for a fit, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("state {index} at E = {energy} has <Lambda> = {value:e}, below the conditioning floor")]
    Conditioning { index: usize, energy: C64, value: f64 },
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("thread pool: {0}")]
    Threads(String),
    #[error(transparent)]
    Entanglement(#[from] siec_entanglement::EntanglementError),
    #[error(transparent)]
    Spectral(#[from] siec_spectral::SpectralError),
    #[error(transparent)]
    Gbz(#[from] siec_gbz::GbzError),
    #[error(transparent)]
    Lattice(#[from] siec_lattice::LatticeError),
}
