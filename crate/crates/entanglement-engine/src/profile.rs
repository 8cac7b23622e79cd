use num_complex::Complex64;

use crate::{CorrelationMatrix, EntanglementError, C64};

/// Eigenvalues of `P̄` within this distance share one profile.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenstateProfile {
    pub p: C64,
    /// Kept cells in ascending order.
    pub cells: Vec<usize>,
    /// `|Ψ_p(x)|` per kept cell, summed in quadrature over orbitals and copies.
    pub amplitude: Vec<f64>,
    /// `|Ψ_p(x)| / |Ψ_ref(x)|` when a reference state was supplied.
    pub ratio: Option<Vec<f64>>,
    pub cluster_size: usize,
}

/// Spatial profile of the right eigenvector of `P̄` belonging to the `which`-th
/// eigenvalue in `(Re, Im)` order.
///
/// Degenerate eigenvalues share the profile of their whole right eigenspace, so
/// the result does not depend on the basis the eigensolver returns.
pub fn entanglement_eigenstate_profile(
    corr: &CorrelationMatrix,
    which: usize,
    reference: Option<&[C64]>,
) -> Result<EigenstateProfile, EntanglementError> {
    let n = corr.matrix.nrows();
    if which >= n {
        return Err(EntanglementError::Domain(format!("eigen-index {which} out of range for {n} eigenvalues")));
    }
    let eig = corr.matrix.eigen().map_err(|e| EntanglementError::Eigen(format!("{e:?}")))?;
    let values: Vec<C64> = (0..n).map(|i| eig.S()[i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re).then(values[a].im.total_cmp(&values[b].im)));
    let p = values[order[which]];
    let cluster: Vec<usize> = (0..n).filter(|&i| (values[i] - p).norm() <= CLUSTER_TOLERANCE).collect();
    let basis = orthonormal_columns(eig.U(), &cluster);
    let weights: Vec<f64> = (0..n).map(|i| basis.iter().map(|q| q[i].norm_sqr()).sum()).collect();

    let site_cells = corr.kept_cells();
    let mut cells = site_cells.clone();
    cells.sort_unstable();
    cells.dedup();
    let per_cell = |w: &[f64]| -> Vec<f64> {
        cells
            .iter()
            .map(|&c| site_cells.iter().zip(w).filter(|(&sc, _)| sc == c).map(|(_, &x)| x).sum::<f64>().sqrt())
            .collect()
    };
    let amplitude = per_cell(&weights);
    let ratio = match reference {
        None => None,
        Some(r) => {
            if r.len() != corr.layout.dim() {
                return Err(EntanglementError::Domain(format!(
                    "reference state has {} entries, expected {}",
                    r.len(),
                    corr.layout.dim()
                )));
            }
            let kept: Vec<f64> = corr.kept_sites.iter().map(|&s| r[s].norm_sqr()).collect();
            let norm: f64 = kept.iter().sum();
            let reference_profile = per_cell(&kept.iter().map(|w| w / norm).collect::<Vec<_>>());
            Some(amplitude.iter().zip(&reference_profile).map(|(a, b)| a / b).collect())
        }
    };
    Ok(EigenstateProfile { p, cells, amplitude, ratio, cluster_size: cluster.len() })
}

/// Modified Gram–Schmidt on the selected columns; dependent columns are dropped.
fn orthonormal_columns(u: faer::MatRef<'_, C64>, columns: &[usize]) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for &c in columns {
        let mut v: Vec<C64> = (0..u.nrows()).map(|i| u[(i, c)]).collect();
        for q in &basis {
            let ov: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= ov * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-10 {
            basis.push(v.into_iter().map(|x| x / Complex64::new(norm, 0.0)).collect());
        }
    }
    basis
}
