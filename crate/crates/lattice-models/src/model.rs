use std::collections::BTreeMap;
use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;

use crate::{LatticeError, C64};

/// Matrix-valued Laurent polynomial `H(z) = Σ_m h_m z^m`.
///
/// The coefficient `h_m` is the hopping block from cell `x` to cell `x + m`,
/// so in real space block `(x, x')` equals `h_{x' - x}`.
#[derive(Clone, Debug)]
pub struct BlochModel {
    label: String,
    n_bands: usize,
    hoppings: BTreeMap<i32, Mat<C64>>,
    hermitian: bool,
}

impl BlochModel {
    pub fn new(
        label: impl Into<String>,
        n_bands: usize,
        hoppings: BTreeMap<i32, Mat<C64>>,
    ) -> Result<Self, LatticeError> {
        if n_bands == 0 {
            return Err(LatticeError::Domain("n_bands must be positive".into()));
        }
        for (m, h) in &hoppings {
            if h.nrows() != n_bands || h.ncols() != n_bands {
                return Err(LatticeError::Domain(format!(
                    "coefficient of z^{m} is {}x{}, expected {n_bands}x{n_bands}",
                    h.nrows(),
                    h.ncols()
                )));
            }
            if !is_finite(h) {
                return Err(LatticeError::Domain(format!("coefficient of z^{m} is not finite")));
            }
        }
        let hoppings: BTreeMap<i32, Mat<C64>> = hoppings.into_iter().filter(|(_, h)| !is_zero(h)).collect();
        if hoppings.is_empty() {
            return Err(LatticeError::Domain("model has no nonzero coefficient".into()));
        }
        let model = Self { label: label.into(), n_bands, hoppings, hermitian: false };
        if model.m_max() < 1 {
            return Err(LatticeError::Domain("model has no inter-cell hopping (m_max = 0)".into()));
        }
        Ok(model)
    }

    /// Builds a two-band model `f(z) σ₊ + g(z) σ₋` from the Laurent coefficients of `f` and `g`.
    pub fn two_band(
        label: impl Into<String>,
        upper: &[(i32, C64)],
        lower: &[(i32, C64)],
    ) -> Result<Self, LatticeError> {
        let mut hoppings: BTreeMap<i32, Mat<C64>> = BTreeMap::new();
        for &(m, c) in upper {
            hoppings.entry(m).or_insert_with(|| Mat::zeros(2, 2))[(0, 1)] += c;
        }
        for &(m, c) in lower {
            hoppings.entry(m).or_insert_with(|| Mat::zeros(2, 2))[(1, 0)] += c;
        }
        Self::new(label, 2, hoppings)
    }

    /// Marks the model as Hermitian after checking `H(z)† = H(z)` on a unit-circle grid.
    pub fn flagged_hermitian(mut self) -> Result<Self, LatticeError> {
        if !self.is_hermitian_on_circle(64, 1e-12) {
            return Err(LatticeError::Domain(format!("model '{}' is not Hermitian on the unit circle", self.label)));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_bands(&self) -> usize {
        self.n_bands
    }

    pub fn hoppings(&self) -> &BTreeMap<i32, Mat<C64>> {
        &self.hoppings
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Largest |m| with a nonzero coefficient.
    pub fn m_max(&self) -> i32 {
        self.hoppings.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    pub fn min_offset(&self) -> i32 {
        *self.hoppings.keys().next().expect("model is nonempty")
    }

    pub fn max_offset(&self) -> i32 {
        *self.hoppings.keys().next_back().expect("model is nonempty")
    }

    /// Evaluates `H(z)`.
    pub fn evaluate(&self, z: C64) -> Result<Mat<C64>, LatticeError> {
        if z == Complex64::new(0.0, 0.0) || !z.is_finite() {
            return Err(LatticeError::Domain(format!("cannot evaluate the Bloch symbol at z = {z}")));
        }
        let n = self.n_bands;
        let mut out = Mat::<C64>::zeros(n, n);
        for (&m, h) in &self.hoppings {
            let zm = z.powi(m);
            for j in 0..n {
                for i in 0..n {
                    out[(i, j)] += h[(i, j)] * zm;
                }
            }
        }
        Ok(out)
    }

    /// Evaluates `H(e^{iK})` for a complex momentum `K`.
    pub fn evaluate_momentum(&self, k: C64) -> Result<Mat<C64>, LatticeError> {
        self.evaluate((Complex64::i() * k).exp())
    }

    pub fn is_hermitian_on_circle(&self, samples: usize, tol: f64) -> bool {
        (0..samples).all(|s| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * s as f64 / samples as f64);
            let h = self.evaluate(z).expect("unit-circle point is nonzero");
            let n = self.n_bands;
            (0..n).all(|i| (0..n).all(|j| (h[(i, j)] - h[(j, i)].conj()).norm() <= tol))
        })
    }

    /// Returns the model with `h_m → h_m r^m`.
    ///
    /// Under open boundaries this is the similarity transform by `diag(r^x)`, which
    /// leaves the spectrum and every cell-local quantity unchanged while taming the
    /// exponential growth of skin modes.
    pub fn gauge_rescaled(&self, r: f64) -> Result<Self, LatticeError> {
        if !(r.is_finite() && r > 0.0) {
            return Err(LatticeError::Domain(format!("gauge factor must be positive, got {r}")));
        }
        let hoppings = self
            .hoppings
            .iter()
            .map(|(&m, h)| {
                let f = r.powi(m);
                (m, Mat::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)] * f))
            })
            .collect();
        Ok(Self { label: self.label.clone(), n_bands: self.n_bands, hoppings, hermitian: false })
    }

    /// Recognizes `(t_L + z^{-1}) σ₊ + (t_R + z) σ₋` and returns `(t_L, t_R)`.
    pub fn ssh_parameters(&self) -> Option<(f64, f64)> {
        if self.n_bands != 2 || self.hoppings.len() != 3 {
            return None;
        }
        let h0 = self.hoppings.get(&0)?;
        let hm = self.hoppings.get(&-1)?;
        let hp = self.hoppings.get(&1)?;
        let exact = |a: C64, b: f64| (a - b).norm() <= 1e-14;
        let ok = exact(h0[(0, 0)], 0.0)
            && exact(h0[(1, 1)], 0.0)
            && h0[(0, 1)].im.abs() <= 1e-14
            && h0[(1, 0)].im.abs() <= 1e-14
            && exact(hm[(0, 1)], 1.0)
            && exact(hm[(0, 0)], 0.0)
            && exact(hm[(1, 0)], 0.0)
            && exact(hm[(1, 1)], 0.0)
            && exact(hp[(1, 0)], 1.0)
            && exact(hp[(0, 0)], 0.0)
            && exact(hp[(0, 1)], 0.0)
            && exact(hp[(1, 1)], 0.0);
        ok.then(|| (h0[(0, 1)].re, h0[(1, 0)].re))
    }
}

fn is_zero(h: &Mat<C64>) -> bool {
    (0..h.ncols()).all(|j| (0..h.nrows()).all(|i| h[(i, j)] == Complex64::new(0.0, 0.0)))
}

fn is_finite(h: &Mat<C64>) -> bool {
    (0..h.ncols()).all(|j| (0..h.nrows()).all(|i| h[(i, j)].is_finite()))
}

/// `σ₊ = [[0, 1], [0, 0]]`.
pub fn sigma_plus() -> Mat<C64> {
    let mut m = Mat::zeros(2, 2);
    m[(0, 1)] = Complex64::new(1.0, 0.0);
    m
}

/// `σ₋ = [[0, 0], [1, 0]]`.
pub fn sigma_minus() -> Mat<C64> {
    let mut m = Mat::zeros(2, 2);
    m[(1, 0)] = Complex64::new(1.0, 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    fn ssh(t_l: f64, t_r: f64) -> BlochModel {
        BlochModel::two_band("ssh", &[(0, c(t_l, 0.0)), (-1, c(1.0, 0.0))], &[(0, c(t_r, 0.0)), (1, c(1.0, 0.0))])
            .unwrap()
    }

    #[test]
    fn evaluate_at_one_and_minus_one() {
        let m = ssh(1.62, 0.89);
        let h = m.evaluate(c(1.0, 0.0)).unwrap();
        assert!((h[(0, 1)] - c(2.62, 0.0)).norm() < 1e-14);
        assert!((h[(1, 0)] - c(1.89, 0.0)).norm() < 1e-14);
        let h = m.evaluate(c(-1.0, 0.0)).unwrap();
        assert!((h[(0, 1)] - c(0.62, 0.0)).norm() < 1e-14);
        assert!((h[(1, 0)] - c(-0.11, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn evaluate_rejects_zero() {
        assert!(matches!(ssh(1.0, 1.0).evaluate(c(0.0, 0.0)), Err(LatticeError::Domain(_))));
    }

    #[test]
    fn hermitian_limit() {
        let m = ssh(1.0, 1.0).flagged_hermitian().unwrap();
        assert!(m.is_flagged_hermitian());
        assert!(ssh(1.62, 0.89).flagged_hermitian().is_err());
    }

    #[test]
    fn zero_model_rejected() {
        assert!(BlochModel::two_band("z", &[(1, c(0.0, 0.0))], &[]).is_err());
        assert!(BlochModel::two_band("onsite", &[(0, c(1.0, 0.0))], &[]).is_err());
    }

    #[test]
    fn recognizes_ssh_family() {
        assert_eq!(ssh(1.62, 0.89).ssh_parameters(), Some((1.62, 0.89)));
        let other = BlochModel::two_band(
            "b",
            &[(0, c(1.0, 0.0)), (-2, c(1.0 / 3.0, 0.0))],
            &[(0, c(0.5, 0.0)), (1, c(1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(other.ssh_parameters(), None);
    }

    #[test]
    fn gauge_rescale_scales_offsets() {
        let m = ssh(1.5, 0.7).gauge_rescaled(0.5).unwrap();
        assert!((m.hoppings()[&1][(1, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((m.hoppings()[&-1][(0, 1)] - c(2.0, 0.0)).norm() < 1e-15);
    }
}
