//! Bloch Hamiltonians of one-dimensional non-Hermitian chains and their dense
//! real-space matrices.
//!
//! Sites are ordered cell-major with orbitals `(A, B)` inside each cell. A coupled
//! ladder stores chain I first and chain II (the transposed chain) second.

mod assemble;
mod catalog;
mod model;

pub use assemble::{
    build_chain, build_coupled, inversion_operator, inversion_permutation, Boundary, ChainSpec, CoupledSpec, SiteLayout,
};
pub use catalog::{nh_ssh, params, predefined, ssh_like, ModelName};
pub use model::{sigma_minus, sigma_plus, BlochModel};

pub use faer::Mat;
pub use num_complex::Complex64 as C64;

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("model {model} requires parameter '{param}'")]
    MissingParameter { model: String, param: String },
    #[error("model {model} does not take parameter '{param}'")]
    UnknownParameter { model: String, param: String },
}
