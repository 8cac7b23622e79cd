use siec_lattice::BlochModel;

use crate::roots::char_poly_roots;
use crate::C64;

/// How one root is picked from each energy's root set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootRule {
    /// Largest `|z|` with `|z| ≤ 1 + tol`; the smallest root if all lie outside.
    SlowestDecaying { tol: f64 },
    /// The `index`-th root in ascending `|z|`.
    Index(usize),
}

impl Default for RootRule {
    fn default() -> Self {
        RootRule::SlowestDecaying { tol: 1e-9 }
    }
}

impl RootRule {
    pub fn select(self, sorted_roots: &[C64]) -> Option<C64> {
        match self {
            RootRule::SlowestDecaying { tol } => {
                sorted_roots.iter().rev().find(|z| z.norm() <= 1.0 + tol).or(sorted_roots.first()).copied()
            }
            RootRule::Index(i) => sorted_roots.get(i).copied(),
        }
    }
}

/// Numerical GBZ: one root per energy, `None` where the root solve failed.
pub fn gbz_from_spectrum(model: &BlochModel, energies: &[C64], rule: RootRule) -> Vec<Option<C64>> {
    energies.iter().map(|&e| char_poly_roots(model, e).ok().and_then(|set| rule.select(&set.roots))).collect()
}

/// Eigenvalues of `H(z)` at each point, concatenated in input order.
pub fn bloch_spectrum_on(model: &BlochModel, zs: &[C64]) -> Result<Vec<C64>, crate::GbzError> {
    let mut out = Vec::with_capacity(zs.len() * model.n_bands());
    for &z in zs {
        let h = model.evaluate(z)?;
        out.extend(h.eigenvalues().map_err(|e| crate::GbzError::Numeric(format!("{e:?}")))?);
    }
    Ok(out)
}
