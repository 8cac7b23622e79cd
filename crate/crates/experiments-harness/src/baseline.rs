use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use siec_entanglement::{entanglement, occupied_projector, truncate, FermiRule, DEFAULT_EPS_F};
use siec_lattice::{build_chain, params, Boundary, ChainSpec, ModelName, SiteLayout};
use siec_spectral::eig_biorthogonal;

use crate::{linear_fit, CutRule, ExperimentError, Fit, ModelSpec};

/// Sizes below this are dropped from baseline fits.
pub const MIN_BASELINE_LENGTH: usize = 12;

/// Single-chain reference models for the logarithmic scaling of `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Baseline {
    /// Hermitian SSH at `t1 = t2 = 1`.
    HermitianCritical,
    /// Skin-effect SSH with `t_L = t2 = 1`, `t_R = 0.5`.
    NhseS11,
    /// The `(2 − 2cos k)` exceptional-point chain.
    EpS11,
}

/// How a baseline is put on a lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineConvention {
    pub boundary: Boundary,
    pub cut: CutRule,
    pub fermi_rule: FermiRule,
    /// Similarity gauge `h_m → h_m r^m` applied before diagonalization (open chains only).
    pub gauge: Option<f64>,
}

impl Baseline {
    pub const ALL: [Baseline; 3] = [Baseline::HermitianCritical, Baseline::NhseS11, Baseline::EpS11];

    pub fn as_str(self) -> &'static str {
        match self {
            Baseline::HermitianCritical => "hermitian_critical",
            Baseline::NhseS11 => "nhse_s11",
            Baseline::EpS11 => "ep_s11",
        }
    }

    pub fn model(self) -> ModelSpec {
        match self {
            Baseline::HermitianCritical => ModelSpec::new(ModelName::HermitianSsh, params(&[("t1", 1.0), ("t2", 1.0)])),
            Baseline::NhseS11 => {
                ModelSpec::new(ModelName::NhseSshS11, params(&[("t_l", 1.0), ("t_r", 0.5), ("t2", 1.0)]))
            }
            Baseline::EpS11 => ModelSpec::new(ModelName::EpModelS11, params(&[])),
        }
    }

    pub fn convention(self) -> BaselineConvention {
        match self {
            Baseline::HermitianCritical => BaselineConvention {
                boundary: Boundary::Open,
                cut: CutRule::Centered,
                fermi_rule: FermiRule::Strict,
                gauge: None,
            },
            Baseline::NhseS11 => BaselineConvention {
                boundary: Boundary::Periodic,
                cut: CutRule::Half,
                fermi_rule: FermiRule::HalfFilling,
                gauge: None,
            },
            Baseline::EpS11 => BaselineConvention {
                boundary: Boundary::Open,
                cut: CutRule::Half,
                fermi_rule: FermiRule::NegativeOnly,
                gauge: Some(0.8),
            },
        }
    }

    /// Sizes between 16 and 120 in steps of 4.
    ///
    /// The periodic skin-effect chain uses odd sizes, since even ones put `k = π` and its
    /// zero mode on the momentum grid. The exceptional-point chain stops at 108, beyond
    /// which its eigenvectors are numerically defective in double precision.
    pub fn default_lengths(self) -> Vec<usize> {
        match self {
            Baseline::HermitianCritical => (16..=120).step_by(4).collect(),
            Baseline::NhseS11 => (17..=119).step_by(4).collect(),
            Baseline::EpS11 => (16..=108).step_by(4).collect(),
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Baseline::ALL.into_iter().find(|b| b.as_str() == s).ok_or_else(|| format!("unknown baseline {s:?}"))
    }
}

/// `S` of one baseline chain of `length` cells.
pub fn baseline_entropy(
    baseline: Baseline,
    convention: &BaselineConvention,
    length: usize,
) -> Result<f64, ExperimentError> {
    let mut model = baseline.model().build()?;
    if let Some(r) = convention.gauge {
        if convention.boundary != Boundary::Open {
            return Err(ExperimentError::Domain("a gauge rescaling is a similarity only for open chains".into()));
        }
        model = model.gauge_rescaled(r)?;
    }
    let n_bands = model.n_bands();
    let h = build_chain(&ChainSpec::new(model, length, convention.boundary)?)?;
    let sys = eig_biorthogonal(&h)?;
    let projector = occupied_projector(&sys, convention.fermi_rule, DEFAULT_EPS_F)?;
    let corr = truncate(&projector.matrix, convention.cut.resolve(length)?, SiteLayout::single(length, n_bands))?;
    Ok(entanglement(&corr)?.s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogFit {
    pub baseline: Baseline,
    /// `S = slope·ln L + intercept`.
    pub fit: Fit,
    pub lengths: Vec<usize>,
    pub entropies: Vec<f64>,
}

/// Least-squares fit of `S` against `ln L` over the sizes `≥ MIN_BASELINE_LENGTH`.
pub fn log_scaling_fit(
    baseline: Baseline,
    lengths: &[usize],
    convention: &BaselineConvention,
) -> Result<LogFit, ExperimentError> {
    let lengths: Vec<usize> = lengths.iter().copied().filter(|&l| l >= MIN_BASELINE_LENGTH).collect();
    if lengths.len() < 4 {
        return Err(ExperimentError::TooFewPoints { needed: 4, got: lengths.len() });
    }
    let entropies =
        lengths.par_iter().map(|&l| baseline_entropy(baseline, convention, l)).collect::<Result<Vec<_>, _>>()?;
    let xs: Vec<f64> = lengths.iter().map(|&l| (l as f64).ln()).collect();
    let fit = linear_fit(&xs, &entropies, 4)?;
    Ok(LogFit { baseline, fit, lengths, entropies })
}
