use faer::Mat;
use siec_entanglement::{occupied_projector, FermiRule, DEFAULT_EPS_F};
use siec_spectral::eig_biorthogonal;

use crate::{ExperimentError, C64};

/// `|⟨Λ̂⟩|` below this makes a doubled state unusable.
pub const LAMBDA_FLOOR: f64 = 1e-12;

/// `[[ℋ, ηC], [ηC†, ℋ†]]` with the end-to-end rungs `C = |1⟩⟨N| + |N⟩⟨1|`.
#[derive(Clone, Debug)]
pub struct DoubledSystem {
    pub base: Mat<C64>,
    pub eta: f64,
    pub matrix: Mat<C64>,
}

impl DoubledSystem {
    pub fn base_dim(&self) -> usize {
        self.base.nrows()
    }
}

pub fn build_doubled(base: &Mat<C64>, eta: f64) -> Result<DoubledSystem, ExperimentError> {
    let n = base.nrows();
    if n == 0 || base.ncols() != n {
        return Err(ExperimentError::Domain(format!("base matrix is {}x{}, expected square", n, base.ncols())));
    }
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(ExperimentError::Domain(format!("eta must be >= 0, got {eta}")));
    }
    let mut m = Mat::<C64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = base[(i, j)];
            m[(n + i, n + j)] = base[(j, i)].conj();
        }
    }
    let e = C64::new(eta, 0.0);
    for (i, j) in [(0, n - 1), (n - 1, 0)] {
        m[(i, n + j)] += e;
        m[(n + j, i)] += e;
    }
    Ok(DoubledSystem { base: base.clone(), eta, matrix: m })
}

/// Per-state data of a doubled eigenvector `(u, v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaEntry {
    pub index: usize,
    pub energy: C64,
    /// `⟨Λ̂⟩ = vᵀu`: the lower block, conjugated, paired with the upper block.
    pub lambda: C64,
    /// `⟨Ψᴸ|Ψᴿ⟩` of the components of `u` and `conj(v)` along the nearest base eigenpair.
    pub biorthogonal_overlap: C64,
    /// `1 − |lᵀv| / (‖l‖‖v‖)`: misalignment of the lower block with `conj(ψᴸ)`.
    pub lower_alignment_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementCheck {
    /// `Σ_{Re E < 0} ⟨Â Λ̂⟩ / ⟨Λ̂⟩` over doubled states.
    pub lhs: C64,
    /// `2 Tr(Â P)` with the biorthogonal occupied projector of the base system.
    pub rhs: C64,
    pub abs_error: f64,
    pub occupied_states: usize,
    pub entries: Vec<LambdaEntry>,
}

pub fn measurement_identity_check(doubled: &DoubledSystem, a: &Mat<C64>) -> Result<MeasurementCheck, ExperimentError> {
    let n = doubled.base_dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(ExperimentError::Domain(format!("operator is {}x{}, expected {n}x{n}", a.nrows(), a.ncols())));
    }
    let base = eig_biorthogonal(&doubled.base)?;
    let projector = occupied_projector(&base, FermiRule::Strict, DEFAULT_EPS_F)?;
    let rhs = C64::new(2.0, 0.0)
        * (0..n).map(|i| (0..n).map(|k| a[(i, k)] * projector.matrix[(k, i)]).sum::<C64>()).sum::<C64>();

    let eig = doubled.matrix.eigen().map_err(|e| ExperimentError::Eigen(format!("{e:?}")))?;
    let (values, vectors) = (eig.S(), eig.U());
    let bilinear = |x: &dyn Fn(usize) -> C64, y: &dyn Fn(usize) -> C64| (0..n).map(|i| x(i) * y(i)).sum::<C64>();
    let mut lhs = C64::new(0.0, 0.0);
    let mut occupied_states = 0;
    let mut entries = Vec::with_capacity(2 * n);
    for j in 0..2 * n {
        let energy = values[j];
        let u = |i: usize| vectors[(i, j)];
        let v = |i: usize| vectors[(n + i, j)];
        let lambda = bilinear(&v, &u);
        if lambda.norm() < LAMBDA_FLOOR {
            return Err(ExperimentError::Conditioning { index: j, energy, value: lambda.norm() });
        }
        let nearest = (0..base.len())
            .min_by(|&x, &y| (base.energies()[x] - energy).norm().total_cmp(&(base.energies()[y] - energy).norm()))
            .expect("nonempty base spectrum");
        let r = |i: usize| base.right_vectors()[(i, nearest)];
        let l = |i: usize| base.left_vectors()[(i, nearest)];
        let l_conj = |i: usize| l(i).conj();
        let biorthogonal_overlap = bilinear(&v, &r) * bilinear(&l_conj, &u) / bilinear(&l_conj, &r);
        let norm = |f: &dyn Fn(usize) -> C64| (0..n).map(|i| f(i).norm_sqr()).sum::<f64>().sqrt();
        let lower_alignment_error = 1.0 - bilinear(&l, &v).norm() / (norm(&l) * norm(&v));
        entries.push(LambdaEntry { index: j, energy, lambda, biorthogonal_overlap, lower_alignment_error });
        if energy.re < -DEFAULT_EPS_F {
            let au = |i: usize| (0..n).map(|k| a[(i, k)] * u(k)).sum::<C64>();
            lhs += bilinear(&v, &au) / lambda;
            occupied_states += 1;
        }
    }
    Ok(MeasurementCheck { lhs, rhs, abs_error: (lhs - rhs).norm(), occupied_states, entries })
}
