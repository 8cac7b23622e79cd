use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;
use siec_gbz::{k_grid, scale_gbz};
use siec_lattice::{nh_ssh, SiteLayout};

use crate::corr::kept_sites;
use crate::symbol::projector_symbol;
use crate::{CorrSource, CorrelationMatrix, Cut, EntanglementError, C64};

/// Imaginary part of the complex momentum on the effective path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ImKRule {
    /// `−log r` with `r` the scale-dependent GBZ radius at the current `L`.
    Scaling,
    /// `α/(L₀+1)` for a fixed `L₀`, independent of the current `L`.
    Frozen(usize),
}

/// Effective two-component correlation matrix
/// `⟨x₁α|P̄|x₂β⟩ = (1/L) Σ_k P^{αβ}_{k + i Im K} e^{ik(x₁−x₂)}` on `k = 2πm/(L+1)`.
pub fn effective_corr_matrix(
    t_l: f64,
    t_r: f64,
    delta: f64,
    length: usize,
    cut: Cut,
    rule: ImKRule,
) -> Result<CorrelationMatrix, EntanglementError> {
    let gbz = scale_gbz(t_l, t_r, delta, length)?;
    let im_k = match rule {
        ImKRule::Scaling => -gbz.radius().ln(),
        ImKRule::Frozen(l0) => gbz.critical.expect("scale_gbz sets critical parameters").alpha / (l0 as f64 + 1.0),
    };
    let model = nh_ssh(t_l, t_r)?;
    let layout = SiteLayout::single(length, 2);
    cut.validate(length)?;
    let ks = k_grid(length);
    let mut symbols = Vec::with_capacity(ks.len());
    for &k in &ks {
        let p = projector_symbol(&model, Complex64::new(k, im_k)).map_err(|e| match e {
            EntanglementError::Singular { k, gap, .. } => EntanglementError::Singular { length: Some(length), k, gap },
            other => other,
        })?;
        symbols.push(p);
    }
    let kept = kept_sites(layout, cut);
    let cells: Vec<usize> = kept.iter().map(|&s| layout.locate(s).1).collect();
    let mut blocks: BTreeMap<i64, Mat<C64>> = BTreeMap::new();
    for &x1 in &cells {
        for &x2 in &cells {
            let d = x1 as i64 - x2 as i64;
            blocks.entry(d).or_insert_with(|| {
                let mut b = Mat::<C64>::zeros(2, 2);
                for (p, &k) in symbols.iter().zip(&ks) {
                    let phase = Complex64::from_polar(1.0, k * d as f64);
                    for i in 0..2 {
                        for j in 0..2 {
                            b[(i, j)] += p[(i, j)] * phase;
                        }
                    }
                }
                Mat::from_fn(2, 2, |i, j| b[(i, j)] / length as f64)
            });
        }
    }
    let matrix = Mat::from_fn(kept.len(), kept.len(), |i, j| {
        let (_, x1, a) = layout.locate(kept[i]);
        let (_, x2, b) = layout.locate(kept[j]);
        blocks[&(x1 as i64 - x2 as i64)][(a, b)]
    });
    Ok(CorrelationMatrix { matrix, kept_sites: kept, layout, cut, source: CorrSource::EffectiveGbz })
}
