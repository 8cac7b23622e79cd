use faer::Mat;
use num_complex::Complex64;

use crate::C64;

/// Laurent polynomial `Σ_{j} c_j z^{low + j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub low: i32,
    pub coeffs: Vec<C64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self { low: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self { low: 0, coeffs: vec![c] }.normalized()
    }

    pub fn monomial(power: i32, c: C64) -> Self {
        Self { low: power, coeffs: vec![c] }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    /// Drops exactly vanishing coefficients at either end.
    pub fn normalized(mut self) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        while self.coeffs.last() == Some(&zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == zero).count();
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (high - low + 1) as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + j] += c;
        }
        for (j, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - low) as usize + j] += c;
        }
        Laurent { low, coeffs }.normalized()
    }

    pub fn scale(&self, s: C64) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| c * s).collect() }.normalized()
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent { low: self.low + other.low, coeffs }.normalized()
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.low)
    }
}

/// Determinant of a square matrix of Laurent polynomials by cofactor expansion.
pub fn laurent_det(m: &[Vec<Laurent>]) -> Laurent {
    let n = m.len();
    match n {
        0 => Laurent::constant(Complex64::new(1.0, 0.0)),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).add(&m[0][1].mul(&m[1][0]).scale(Complex64::new(-1.0, 0.0))),
        _ => {
            let mut acc = Laurent::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Laurent>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                acc = acc.add(&m[0][col].mul(&laurent_det(&minor)).scale(Complex64::new(sign, 0.0)));
            }
            acc
        }
    }
}

/// All roots of `Σ_j c_j z^j` (ascending coefficients) with multiplicity.
///
/// Uses the eigenvalues of the companion matrix followed by a few Newton steps.
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>, String> {
    let mut c = coeffs.to_vec();
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err("polynomial is identically zero".into());
    }
    while c.last().is_some_and(|x| x.norm() <= 1e-14 * scale) {
        c.pop();
    }
    let degree = c.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = c[degree];
    let companion = Mat::<C64>::from_fn(degree, degree, |i, j| {
        if i == 0 {
            -c[degree - 1 - j] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut roots = companion.eigenvalues().map_err(|e| format!("companion eigensolver failed: {e:?}"))?;
    for r in roots.iter_mut() {
        *r = polish(&c, *r);
    }
    Ok(roots)
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn polish(c: &[C64], mut z: C64) -> C64 {
    for _ in 0..3 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 || !dp.is_finite() {
            break;
        }
        let next = z - p / dp;
        if !next.is_finite() || horner(c, next).0.norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laurent_product() {
        // (1 + z^{-1})(2 + z) = 2 + z + 2 z^{-1} + 1 = 3 + z + 2 z^{-1}
        let a = Laurent { low: -1, coeffs: vec![c(1.0, 0.0), c(1.0, 0.0)] };
        let b = Laurent { low: 0, coeffs: vec![c(2.0, 0.0), c(1.0, 0.0)] };
        let p = a.mul(&b);
        assert_eq!(p.low, -1);
        assert_eq!(p.coeffs, vec![c(2.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]);
        let z = c(0.3, 0.7);
        assert!((p.eval(z) - a.eval(z) * b.eval(z)).norm() < 1e-14);
    }

    #[test]
    fn cancellation_trims() {
        let a = Laurent { low: -2, coeffs: vec![c(1.0, 0.0), c(5.0, 0.0)] };
        let s = a.add(&Laurent::monomial(-2, c(-1.0, 0.0)));
        assert_eq!(s, Laurent { low: -1, coeffs: vec![c(5.0, 0.0)] });
    }

    #[test]
    fn cubic_roots() {
        // (z - 1)(z + 2)(z - i)
        let roots = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0)];
        let mut p = Laurent::constant(c(1.0, 0.0));
        for r in roots {
            p = p.mul(&Laurent { low: 0, coeffs: vec![-r, c(1.0, 0.0)] });
        }
        let found = polynomial_roots(&p.coeffs).unwrap();
        assert_eq!(found.len(), 3);
        for r in roots {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-12));
        }
    }

    #[test]
    fn three_by_three_det() {
        let k = |x: f64| Laurent::constant(c(x, 0.0));
        let m = vec![vec![k(2.0), k(0.0), k(1.0)], vec![k(1.0), k(3.0), k(0.0)], vec![k(0.0), k(1.0), k(4.0)]];
        assert_eq!(laurent_det(&m), k(25.0));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(polynomial_roots(&[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }
}
