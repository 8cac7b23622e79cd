use num_complex::Complex64;
use siec_lattice::BlochModel;

use crate::poly::{laurent_det, polynomial_roots, Laurent};
use crate::{GbzError, C64};

/// Roots of `det(H(z) − E) = 0` at a fixed energy.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub energy: C64,
    /// Sorted by ascending `|z|`, ties by ascending `arg z`.
    pub roots: Vec<C64>,
    /// Eigenvector ratio `ψ_B / ψ_A` per root; present for two-band models.
    pub phi: Option<Vec<C64>>,
}

/// `det(H(z) − E·I)` as an exact Laurent polynomial in `z`.
pub fn characteristic_laurent(model: &BlochModel, energy: C64) -> Laurent {
    let n = model.n_bands();
    let entries: Vec<Vec<Laurent>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = Laurent::zero();
                    for (&m, h) in model.hoppings() {
                        p = p.add(&Laurent::monomial(m, h[(i, j)]));
                    }
                    if i == j {
                        p = p.add(&Laurent::constant(-energy));
                    }
                    p
                })
                .collect()
        })
        .collect();
    laurent_det(&entries)
}

/// Solves `det(H(z) − E) = 0`.
///
/// Negative powers are cleared by the lowest power actually present in the
/// determinant, so no spurious roots at `z = 0` appear.
pub fn char_poly_roots(model: &BlochModel, energy: C64) -> Result<RootSet, GbzError> {
    if !energy.is_finite() {
        return Err(GbzError::Domain(format!("energy {energy} is not finite")));
    }
    let det = characteristic_laurent(model, energy);
    if det.is_zero() {
        return Err(GbzError::Domain(format!("det(H(z) − E) vanishes identically for {}", model.label())));
    }
    let mut roots = polynomial_roots(&det.coeffs).map_err(GbzError::Numeric)?;
    sort_roots(&mut roots);
    let phi = (model.n_bands() == 2).then(|| roots.iter().map(|&z| eigenvector_ratio(model, z, energy)).collect());
    Ok(RootSet { energy, roots, phi })
}

pub fn sort_roots(roots: &mut [C64]) {
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
}

/// `φ = h₂₁ / (E − h₂₂)`, or `(E − h₁₁) / h₁₂` when that denominator is better conditioned.
fn eigenvector_ratio(model: &BlochModel, z: C64, energy: C64) -> C64 {
    let Ok(h) = model.evaluate(z) else {
        return Complex64::new(f64::NAN, f64::NAN);
    };
    let lower = energy - h[(1, 1)];
    if lower.norm() >= h[(0, 1)].norm() {
        h[(1, 0)] / lower
    } else {
        (energy - h[(0, 0)]) / h[(0, 1)]
    }
}

/// Largest `|det(H(z) − E)|` over the roots, relative to the largest coefficient.
pub fn normalized_residual(model: &BlochModel, set: &RootSet) -> f64 {
    let det = characteristic_laurent(model, set.energy);
    let scale = det.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let shifted = Laurent { low: 0, coeffs: det.coeffs.clone() };
    set.roots.iter().map(|&z| shifted.eval(z).norm() / scale).fold(0.0, f64::max)
}
