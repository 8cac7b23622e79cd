use faer::Mat;
use num_complex::Complex64;

use crate::{BlochModel, LatticeError, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Clone, Debug)]
pub struct ChainSpec {
    pub model: BlochModel,
    pub length: usize,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(model: BlochModel, length: usize, boundary: Boundary) -> Result<Self, LatticeError> {
        if length < 2 {
            return Err(LatticeError::Config(format!("chain length must be at least 2, got {length}")));
        }
        if boundary == Boundary::Open && model.m_max() as usize >= length {
            return Err(LatticeError::Config(format!(
                "hopping range {} does not fit an open chain of {length} cells",
                model.m_max()
            )));
        }
        Ok(Self { model, length, boundary })
    }

    pub fn dim(&self) -> usize {
        self.model.n_bands() * self.length
    }
}

/// Two antagonistic chains: chain II is the transpose of chain I and the rungs
/// couple matching cells and sublattices with strength `delta`.
#[derive(Clone, Debug)]
pub struct CoupledSpec {
    pub model: BlochModel,
    pub delta: f64,
    pub length: usize,
}

impl CoupledSpec {
    pub fn new(model: BlochModel, delta: f64, length: usize) -> Result<Self, LatticeError> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(LatticeError::Config(format!("delta must be >= 0, got {delta}")));
        }
        ChainSpec::new(model.clone(), length, Boundary::Open)?;
        Ok(Self { model, delta, length })
    }

    pub fn dim(&self) -> usize {
        2 * self.model.n_bands() * self.length
    }

    pub fn layout(&self) -> SiteLayout {
        SiteLayout { cells: self.length, orbitals: self.model.n_bands(), copies: 2 }
    }
}

/// Index map for cell-major ordering: `copy`, then cell `x`, then orbital.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiteLayout {
    pub cells: usize,
    pub orbitals: usize,
    pub copies: usize,
}

impl SiteLayout {
    pub fn single(cells: usize, orbitals: usize) -> Self {
        Self { cells, orbitals, copies: 1 }
    }

    pub fn dim(&self) -> usize {
        self.cells * self.orbitals * self.copies
    }

    /// Flat index of `(copy, cell, orbital)` with 1-based `cell`.
    pub fn index(&self, copy: usize, cell: usize, orbital: usize) -> usize {
        debug_assert!(copy < self.copies && (1..=self.cells).contains(&cell) && orbital < self.orbitals);
        (copy * self.cells + cell - 1) * self.orbitals + orbital
    }

    /// Inverse of [`SiteLayout::index`].
    pub fn locate(&self, index: usize) -> (usize, usize, usize) {
        let orbital = index % self.orbitals;
        let cell = (index / self.orbitals) % self.cells + 1;
        let copy = index / (self.orbitals * self.cells);
        (copy, cell, orbital)
    }
}

/// Dense real-space Hamiltonian of a single chain.
pub fn build_chain(spec: &ChainSpec) -> Result<Mat<C64>, LatticeError> {
    let n = spec.model.n_bands();
    let l = spec.length as i64;
    let mut h = Mat::<C64>::zeros(spec.dim(), spec.dim());
    for x in 0..l {
        for (&m, block) in spec.model.hoppings() {
            let target = x + m as i64;
            let xp = match spec.boundary {
                Boundary::Open if (0..l).contains(&target) => target,
                Boundary::Open => continue,
                Boundary::Periodic => target.rem_euclid(l),
            };
            let (r0, c0) = (x as usize * n, xp as usize * n);
            for j in 0..n {
                for i in 0..n {
                    h[(r0 + i, c0 + j)] += block[(i, j)];
                }
            }
        }
    }
    Ok(h)
}

/// Dense `[[H, δ·I], [δ·I, Hᵀ]]` with `H` the open chain.
pub fn build_coupled(spec: &CoupledSpec) -> Result<Mat<C64>, LatticeError> {
    let chain = build_chain(&ChainSpec::new(spec.model.clone(), spec.length, Boundary::Open)?)?;
    let n = chain.nrows();
    let delta = Complex64::new(spec.delta, 0.0);
    Ok(Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => chain[(i, j)],
        (false, false) => chain[(j - n, i - n)],
        _ if i % n == j % n => delta,
        _ => Complex64::new(0.0, 0.0),
    }))
}

/// Permutation `(copy, x, a) → (copies−1−copy, L+1−x, n−1−a)` of the coupled ladder.
pub fn inversion_permutation(layout: SiteLayout) -> Vec<usize> {
    (0..layout.dim())
        .map(|idx| {
            let (copy, cell, orbital) = layout.locate(idx);
            layout.index(layout.copies - 1 - copy, layout.cells + 1 - cell, layout.orbitals - 1 - orbital)
        })
        .collect()
}

pub fn inversion_operator(layout: SiteLayout) -> Mat<C64> {
    let perm = inversion_permutation(layout);
    let mut p = Mat::<C64>::zeros(layout.dim(), layout.dim());
    for (i, &j) in perm.iter().enumerate() {
        p[(j, i)] = Complex64::new(1.0, 0.0);
    }
    p
}
