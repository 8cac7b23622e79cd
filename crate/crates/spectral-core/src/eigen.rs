use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use crate::assignment::min_cost_assignment;
use crate::{SpectralError, C64};

/// Relative overlap below which a left/right pair is treated as defective.
pub const DEFECTIVE_THRESHOLD: f64 = 1e-10;
/// Relative eigenvalue separation below which states share a degenerate cluster.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Paired right and left eigenvectors with `⟨ψᴸ_m|ψᴿ_n⟩ = δ_mn` on non-defective states.
///
/// States are ordered by eigenvalue, ascending real part then imaginary part. Right
/// vectors have unit norm as returned; left vectors carry the biorthogonal scale.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    energies: Vec<C64>,
    right: Mat<C64>,
    left: Mat<C64>,
    rigidity: Vec<f64>,
    defective: Vec<bool>,
    pairing_residual: f64,
    ambiguous_pairs: usize,
}

/// Dense right/left eigendecomposition of `m`, the left vectors taken from `m†`.
pub fn eig_biorthogonal(m: &Mat<C64>) -> Result<EigenSystem, SpectralError> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let right = m.eigen().map_err(|e| SpectralError::NoConvergence(format!("{e:?}")))?;
    let adj = m.adjoint().to_owned();
    let left = adj.eigen().map_err(|e| SpectralError::NoConvergence(format!("{e:?}")))?;

    let mut r_order: Vec<usize> = (0..n).collect();
    let e_r: Vec<C64> = (0..n).map(|i| right.S().column_vector()[i]).collect();
    r_order.sort_by(|&a, &b| lex(e_r[a], e_r[b]));
    let mut l_order: Vec<usize> = (0..n).collect();
    let e_l: Vec<C64> = (0..n).map(|i| left.S().column_vector()[i].conj()).collect();
    l_order.sort_by(|&a, &b| lex(e_l[a], e_l[b]));

    let cost = |i: usize, j: usize| (e_r[r_order[i]] - e_l[l_order[j]]).norm();
    let assignment = min_cost_assignment(n, cost);

    let mut ambiguous_pairs = 0;
    for (i, &j) in assignment.iter().enumerate() {
        let best = cost(i, j);
        let rivals = (0..n).filter(|&k| k != j && (cost(i, k) - best).abs() <= 1e-12).count();
        if rivals > 0 {
            ambiguous_pairs += 1;
        }
    }

    let energies: Vec<C64> = r_order.iter().map(|&i| e_r[i]).collect();
    let u_r = right.U();
    let u_l = left.U();
    let rv = Mat::from_fn(n, n, |row, col| u_r[(row, r_order[col])]);
    let lv = Mat::from_fn(n, n, |row, col| u_l[(row, l_order[assignment[col]])]);
    let mut sys = EigenSystem::from_pairs(energies, rv, lv)?;
    sys.ambiguous_pairs = ambiguous_pairs;
    Ok(sys)
}

/// Eigenvalues only, ascending real part then imaginary part.
pub fn eigenvalues(m: &Mat<C64>) -> Result<Vec<C64>, SpectralError> {
    check_square(m)?;
    let mut e = m.eigenvalues().map_err(|e| SpectralError::NoConvergence(format!("{e:?}")))?;
    e.sort_by(|a, b| lex(*a, *b));
    Ok(e)
}

pub(crate) fn lex(a: C64, b: C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn check_square(m: &Mat<C64>) -> Result<usize, SpectralError> {
    if m.nrows() != m.ncols() {
        return Err(SpectralError::NotSquare(m.nrows(), m.ncols()));
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(SpectralError::NonFinite);
            }
        }
    }
    Ok(m.nrows())
}

fn dot(l: &Mat<C64>, lc: usize, r: &Mat<C64>, rc: usize) -> C64 {
    (0..l.nrows()).map(|i| l[(i, lc)].conj() * r[(i, rc)]).sum()
}

fn col_norm(m: &Mat<C64>, c: usize) -> f64 {
    (0..m.nrows()).map(|i| m[(i, c)].norm_sqr()).sum::<f64>().sqrt()
}

impl EigenSystem {
    /// Builds a system from already paired columns.
    ///
    /// Right vectors are scaled to unit norm, rigidities are taken from the raw
    /// overlaps, and each non-defective left vector is rescaled to `⟨ψᴸ|ψᴿ⟩ = 1`.
    /// Exactly degenerate clusters are biorthogonalized within the cluster.
    pub fn from_pairs(energies: Vec<C64>, mut right: Mat<C64>, mut left: Mat<C64>) -> Result<Self, SpectralError> {
        let n = energies.len();
        if right.ncols() != n || left.ncols() != n || right.nrows() != left.nrows() {
            return Err(SpectralError::Shape("energies, right and left vectors disagree".into()));
        }
        for c in 0..n {
            let norm = col_norm(&right, c);
            if norm == 0.0 {
                return Err(SpectralError::Shape(format!("right vector {c} is zero")));
            }
            for i in 0..right.nrows() {
                right[(i, c)] /= norm;
            }
        }
        let mut rigidity = vec![0.0; n];
        let mut defective = vec![false; n];
        for c in 0..n {
            let ln = col_norm(&left, c);
            let ov = dot(&left, c, &right, c);
            rigidity[c] = if ln == 0.0 { 0.0 } else { (ov.norm() / ln).min(1.0) };
            defective[c] = ln == 0.0 || ov.norm() < DEFECTIVE_THRESHOLD * ln;
        }

        let scale = energies.iter().map(|e| e.norm()).fold(1.0, f64::max);
        for cluster in degenerate_clusters(&energies, DEGENERACY_TOLERANCE * scale) {
            if cluster.len() == 1 {
                let c = cluster[0];
                if !defective[c] {
                    let ov = dot(&left, c, &right, c);
                    let f = ov.conj().inv();
                    for i in 0..left.nrows() {
                        left[(i, c)] *= f;
                    }
                }
                continue;
            }
            let d = cluster.len();
            let g = Mat::from_fn(d, d, |a, b| dot(&left, cluster[a], &right, cluster[b]));
            let sv = g.singular_values().map_err(|e| SpectralError::NoConvergence(format!("{e:?}")))?;
            let lnorm = cluster.iter().map(|&c| col_norm(&left, c)).fold(0.0, f64::max);
            let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
            if smin < DEFECTIVE_THRESHOLD * lnorm {
                for &c in &cluster {
                    defective[c] = true;
                }
                continue;
            }
            // L_C ← L_C G^{-†} so that L_C† R_C = I.
            let ginv_adj = g.partial_piv_lu().inverse().adjoint().to_owned();
            let old = Mat::from_fn(left.nrows(), d, |i, a| left[(i, cluster[a])]);
            for (b, &c) in cluster.iter().enumerate() {
                for i in 0..left.nrows() {
                    left[(i, c)] = (0..d).map(|a| old[(i, a)] * ginv_adj[(a, b)]).sum();
                }
            }
            for &c in &cluster {
                rigidity[c] = (1.0 / col_norm(&left, c)).min(1.0);
            }
        }

        let pairing_residual =
            (0..n).filter(|&c| !defective[c]).map(|c| (dot(&left, c, &right, c) - 1.0).norm()).fold(0.0, f64::max);
        Ok(Self { energies, right, left, rigidity, defective, pairing_residual, ambiguous_pairs: 0 })
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.right.nrows()
    }

    pub fn energies(&self) -> &[C64] {
        &self.energies
    }

    pub fn right_vectors(&self) -> &Mat<C64> {
        &self.right
    }

    pub fn left_vectors(&self) -> &Mat<C64> {
        &self.left
    }

    pub fn defective_flags(&self) -> &[bool] {
        &self.defective
    }

    pub fn any_defective(&self) -> bool {
        self.defective.iter().any(|&d| d)
    }

    pub fn pairing_residual(&self) -> f64 {
        self.pairing_residual
    }

    /// Number of states whose assignment had a rival within 1e-12 in distance.
    pub fn ambiguous_pairs(&self) -> usize {
        self.ambiguous_pairs
    }

    /// Per-state phase rigidity from the unnormalized pairs.
    pub fn rigidities(&self) -> &[f64] {
        &self.rigidity
    }

    /// `⟨ψᴸ_m|ψᴿ_n⟩`.
    pub fn overlap(&self, m: usize, n: usize) -> C64 {
        dot(&self.left, m, &self.right, n)
    }

    /// Largest deviation of `⟨ψᴸ_m|ψᴿ_n⟩` from `δ_mn` over non-defective states.
    pub fn biorthonormality_error(&self) -> f64 {
        let idx: Vec<usize> = (0..self.len()).filter(|&c| !self.defective[c]).collect();
        let mut worst: f64 = 0.0;
        for &m in &idx {
            for &n in &idx {
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((self.overlap(m, n) - target).norm());
            }
        }
        worst
    }

    /// Max-entry deviation of `Σ_n |ψᴿ_n⟩⟨ψᴸ_n|` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let sum = &self.right * self.left.adjoint();
        let n = sum.nrows();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((sum[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Largest `‖M ψᴿ_n − E_n ψᴿ_n‖` relative to the Frobenius norm of `m`.
    pub fn eigen_residual(&self, m: &Mat<C64>) -> f64 {
        let mr = m * &self.right;
        let scale = m.norm_l2().max(f64::MIN_POSITIVE);
        (0..self.len())
            .map(|c| {
                (0..self.dim())
                    .map(|i| (mr[(i, c)] - self.energies[c] * self.right[(i, c)]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
            / scale
    }

    /// Applies `ψᴿ_n → c_n ψᴿ_n`, `ψᴸ_n → ψᴸ_n / c_n*`, which preserves every pair product.
    pub fn rescaled(&self, factors: &[C64]) -> Result<Self, SpectralError> {
        if factors.len() != self.len() {
            return Err(SpectralError::Shape(format!("expected {} factors, got {}", self.len(), factors.len())));
        }
        if factors.iter().any(|c| c.norm() == 0.0 || !c.is_finite()) {
            return Err(SpectralError::Shape("gauge factors must be finite and nonzero".into()));
        }
        let mut out = self.clone();
        for (c, &f) in factors.iter().enumerate() {
            let g = f.conj().inv();
            for i in 0..self.dim() {
                out.right[(i, c)] *= f;
                out.left[(i, c)] *= g;
            }
        }
        Ok(out)
    }

    /// `Σ_{n ∈ states} |ψᴿ_n⟩⟨ψᴸ_n|`.
    pub fn projector_onto(&self, states: &[usize]) -> Mat<C64> {
        let dim = self.dim();
        let r = Mat::from_fn(dim, states.len(), |i, k| self.right[(i, states[k])]);
        let l = Mat::from_fn(dim, states.len(), |i, k| self.left[(i, states[k])]);
        &r * l.adjoint()
    }
}

fn degenerate_clusters(energies: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = energies.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            if (energies[a] - energies[b]).norm() <= tol {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}
