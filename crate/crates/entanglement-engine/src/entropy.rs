use num_complex::Complex64;

use crate::{CorrelationMatrix, EntanglementError, C64};

/// Occupations closer than this to 0 or 1 contribute nothing.
pub const OCCUPATION_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementResult {
    /// Eigenvalues of `P̄`, sorted by `(Re, Im)`.
    pub p_spectrum: Vec<C64>,
    pub s: f64,
    pub s2: f64,
    /// Largest `|Im|` among the per-mode von Neumann contributions.
    pub im_residual: f64,
}

impl EntanglementResult {
    pub fn p_min(&self) -> f64 {
        self.p_spectrum.iter().map(|p| p.re).fold(f64::INFINITY, f64::min)
    }

    pub fn p_max(&self) -> f64 {
        self.p_spectrum.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Renyi2 {
    pub value: f64,
    /// `|Im(−log Tr P̄²)|`.
    pub residual: f64,
    /// `Tr P̄²` vanished; `value` is `−log` of the smallest positive double.
    pub degenerate: bool,
}

/// `−[p log p + (1−p) log(1−p)]` on the principal branch.
pub fn mode_entropy(p: C64) -> C64 {
    let one = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    if p.norm() >= OCCUPATION_FLOOR {
        s -= p * p.ln();
    }
    let q = one - p;
    if q.norm() >= OCCUPATION_FLOOR {
        s -= q * q.ln();
    }
    s
}

/// Von Neumann entropy of an occupation spectrum: `(Re S, max |Im| per mode)`.
pub fn spectrum_entropy(p: &[C64]) -> (f64, f64) {
    p.iter().map(|&q| mode_entropy(q)).fold((0.0, 0.0), |(s, im), c| (s + c.re, f64::max(im, c.im.abs())))
}

pub fn renyi2(corr: &CorrelationMatrix) -> Renyi2 {
    let m = &corr.matrix;
    let n = m.nrows();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            tr += m[(i, j)] * m[(j, i)];
        }
    }
    if tr.norm() < f64::MIN_POSITIVE {
        return Renyi2 { value: -f64::MIN_POSITIVE.ln(), residual: 0.0, degenerate: true };
    }
    let v = -tr.ln();
    Renyi2 { value: v.re, residual: v.im.abs(), degenerate: false }
}

pub fn entanglement(corr: &CorrelationMatrix) -> Result<EntanglementResult, EntanglementError> {
    let mut p_spectrum = if corr.matrix.nrows() == 0 {
        Vec::new()
    } else {
        corr.matrix.eigenvalues().map_err(|e| EntanglementError::Eigen(format!("{e:?}")))?
    };
    if p_spectrum.iter().any(|p| !p.is_finite()) {
        return Err(EntanglementError::Eigen("non-finite occupation".into()));
    }
    p_spectrum.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let (s, im_residual) = spectrum_entropy(&p_spectrum);
    Ok(EntanglementResult { p_spectrum, s, s2: renyi2(corr).value, im_residual })
}
