use faer::Mat;
use siec_lattice::SiteLayout;

use crate::{EntanglementError, C64};

/// Truncated region `[lo, hi]` of unit cells (1-based, inclusive), removed from every copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cut {
    None,
    Interval { lo: usize, hi: usize },
}

impl Cut {
    /// `[1, ⌊L/2⌋]`.
    pub fn half(length: usize) -> Self {
        Cut::Interval { lo: 1, hi: length / 2 }
    }

    /// `[1, L−1]`, keeping only the last cell.
    pub fn single_cell(length: usize) -> Self {
        Cut::Interval { lo: 1, hi: length - 1 }
    }

    pub fn contains(self, cell: usize) -> bool {
        match self {
            Cut::None => false,
            Cut::Interval { lo, hi } => (lo..=hi).contains(&cell),
        }
    }

    pub fn validate(self, cells: usize) -> Result<(), EntanglementError> {
        match self {
            Cut::None => Ok(()),
            Cut::Interval { lo, hi } => {
                if lo == 0 || lo > hi || hi > cells {
                    Err(EntanglementError::Cut(format!(
                        "cut [{lo}, {hi}] is not a nonempty subinterval of [1, {cells}]"
                    )))
                } else if lo == 1 && hi == cells {
                    Err(EntanglementError::Cut(format!("cut [{lo}, {hi}] removes every cell")))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn bounds(self) -> Option<(usize, usize)> {
        match self {
            Cut::None => None,
            Cut::Interval { lo, hi } => Some((lo, hi)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrSource {
    DensePhysical,
    EffectiveGbz,
}

impl CorrSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrSource::DensePhysical => "dense_physical",
            CorrSource::EffectiveGbz => "effective_gbz",
        }
    }
}

/// Truncated projector `P̄` over the kept sites.
#[derive(Clone, Debug)]
pub struct CorrelationMatrix {
    pub matrix: Mat<C64>,
    /// Indices into the parent site ordering, ascending.
    pub kept_sites: Vec<usize>,
    pub layout: SiteLayout,
    pub cut: Cut,
    pub source: CorrSource,
}

impl CorrelationMatrix {
    /// Unit cell (1-based) of each kept row.
    pub fn kept_cells(&self) -> Vec<usize> {
        self.kept_sites.iter().map(|&s| self.layout.locate(s).1).collect()
    }

    /// `max |P̄ᵢⱼ − conj(P̄ⱼᵢ)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

pub fn kept_sites(layout: SiteLayout, cut: Cut) -> Vec<usize> {
    (0..layout.dim()).filter(|&s| !cut.contains(layout.locate(s).1)).collect()
}

/// `P̄ = R̄ P R̄` restricted to the cells outside `cut`.
pub fn truncate(p: &Mat<C64>, cut: Cut, layout: SiteLayout) -> Result<CorrelationMatrix, EntanglementError> {
    if p.nrows() != layout.dim() || p.ncols() != layout.dim() {
        return Err(EntanglementError::Domain(format!(
            "projector is {}x{} but the layout has {} sites",
            p.nrows(),
            p.ncols(),
            layout.dim()
        )));
    }
    cut.validate(layout.cells)?;
    let kept = kept_sites(layout, cut);
    let matrix = Mat::from_fn(kept.len(), kept.len(), |i, j| p[(kept[i], kept[j])]);
    Ok(CorrelationMatrix { matrix, kept_sites: kept, layout, cut, source: CorrSource::DensePhysical })
}
