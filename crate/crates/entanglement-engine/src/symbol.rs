use faer::Mat;
use num_complex::Complex64;
use siec_lattice::BlochModel;

use crate::{EntanglementError, C64};

/// Band splittings `|E₊ − E₋|` below this are treated as an exceptional point.
pub const EP_THRESHOLD: f64 = 1e-12;

/// Relative size of `Re E` below which the occupied branch is chosen by `Im E`.
const TIE_TOLERANCE: f64 = 1e-12;

/// The two eigenvalues of a 2×2 matrix, occupied branch first.
///
/// Occupied means smaller `Re E`; when the real parts agree to a relative
/// `1e-12`, smaller `Im E`.
pub fn two_band_energies(h: &Mat<C64>) -> (C64, C64) {
    let half_tr = (h[(0, 0)] + h[(1, 1)]) / 2.0;
    let half_diff = (h[(0, 0)] - h[(1, 1)]) / 2.0;
    let root = (half_diff * half_diff + h[(0, 1)] * h[(1, 0)]).sqrt();
    let (a, b) = (half_tr + root, half_tr - root);
    let scale = a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    let a_first = if (a.re - b.re).abs() <= TIE_TOLERANCE * scale { a.im < b.im } else { a.re < b.re };
    if a_first {
        (a, b)
    } else {
        (b, a)
    }
}

/// Occupied-band projector of `H(e^{iK})`, `P_K = (H − E_u)/(E_o − E_u)`.
///
/// For a traceless symbol this is `½(I + H/E_o)` with `E_o` the occupied branch.
pub fn projector_symbol(model: &BlochModel, momentum: C64) -> Result<Mat<C64>, EntanglementError> {
    if model.n_bands() != 2 {
        return Err(EntanglementError::Domain(format!(
            "projector_symbol needs a two-band model, {} has {} bands",
            model.label(),
            model.n_bands()
        )));
    }
    let h = model.evaluate_momentum(momentum)?;
    let (occ, unocc) = two_band_energies(&h);
    let split = occ - unocc;
    if split.norm() < EP_THRESHOLD {
        return Err(EntanglementError::Singular { length: None, k: momentum.re, gap: split.norm() });
    }
    Ok(Mat::from_fn(2, 2, |i, j| {
        let id = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        (h[(i, j)] - unocc * id) / split
    }))
}
