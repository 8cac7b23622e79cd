use std::f64::consts::PI;

use num_complex::Complex64;

use crate::scale::scale_gbz;
use crate::{GbzError, C64};

const MAX_ITERATIONS: usize = 100;
const STEP_TOLERANCE: f64 = 1e-12;
const TIE_TOLERANCE: f64 = 1e-6;

/// Self-consistent boundary-matching root of the coupled chains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryMatch {
    pub z1: C64,
    pub z2: C64,
    /// `E` on the dispersion at `z1`, principal square root.
    pub energy: C64,
    pub iterations: usize,
    /// `|z₁^{L+1} − rhs(z₁)| / |rhs(z₁)|`.
    pub residual: f64,
    pub converged: bool,
}

/// Right-hand side of the matching condition
/// `z₁^{L+1} = b/2 + sqrt((b/2)² + (t_R/t_L)^{L+1} φ₁/φ₂)`, `b = δ(z₁φ₂ − z₂φ₁)/φ₂`,
/// taking the root of larger modulus.
///
/// When both roots have the same modulus to within `TIE_TOLERANCE` (the weak-coupling
/// limit `w ≈ ±sqrt(c)`), the root nearest `z₁^{L+1}` is taken instead.
pub fn matching_rhs(t_l: f64, t_r: f64, delta: f64, length: usize, z1: C64) -> Result<C64, GbzError> {
    let rho = t_r / t_l;
    let z2 = rho / z1;
    let energy = dispersion_energy(t_l, t_r, z1);
    if energy.norm() == 0.0 {
        return Err(GbzError::Numeric(format!("z1 = {z1} sits on a band touching, phi is undefined")));
    }
    let phi1 = (t_r + z1) / energy;
    let phi2 = (t_r + z2) / energy;
    if phi2.norm() == 0.0 {
        return Err(GbzError::Numeric(format!("phi vanishes at z2 = {z2}")));
    }
    let half_b = delta * (z1 * phi2 - z2 * phi1) / phi2 / 2.0;
    let c = rho.powi(length as i32 + 1) * phi1 / phi2;
    let s = (half_b * half_b + c).sqrt();
    let (plus, minus) = (half_b + s, half_b - s);
    let (big, small) = if plus.norm() >= minus.norm() { (plus, minus) } else { (minus, plus) };
    if big.norm() - small.norm() > TIE_TOLERANCE * big.norm() {
        return Ok(big);
    }
    let current = z1.powf(length as f64 + 1.0);
    Ok(if (small - current).norm() < (big - current).norm() { small } else { big })
}

pub fn dispersion_energy(t_l: f64, t_r: f64, z: C64) -> C64 {
    ((t_l + z.inv()) * (t_r + z)).sqrt()
}

/// Solves the matching condition by fixed-point iteration on `z₁ = rhs(z₁)^{1/(L+1)}`.
///
/// The seed has the closed-form radius and the phase of the larger root of the
/// single-chain dispersion at `e_probe`; each step keeps the `(L+1)`-th root branch
/// nearest the current iterate.
pub fn boundary_match_radius(
    t_l: f64,
    t_r: f64,
    delta: f64,
    length: usize,
    e_probe: C64,
) -> Result<BoundaryMatch, GbzError> {
    for (name, v) in [("t_l", t_l), ("t_r", t_r)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(GbzError::Domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(GbzError::Domain(format!("delta must be non-negative and finite, got {delta}")));
    }
    if length == 0 || !e_probe.is_finite() {
        return Err(GbzError::Domain("length must be positive and e_probe finite".into()));
    }
    let radius = if delta > 0.0 {
        scale_gbz(t_l, t_r, delta, length).map(|g| g.radius()).unwrap_or((t_r / t_l).sqrt())
    } else {
        (t_r / t_l).sqrt()
    };
    let mut z = Complex64::from_polar(radius, larger_root(t_l, t_r, e_probe).arg());
    let n = length as f64 + 1.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let w = matching_rhs(t_l, t_r, delta, length, z)?;
        let next = nearest_root(w, n, z);
        let step = (next - z).norm() / z.norm();
        z = next;
        if step < STEP_TOLERANCE {
            converged = true;
            break;
        }
    }
    let rhs = matching_rhs(t_l, t_r, delta, length, z)?;
    let residual = (z.powf(n) - rhs).norm() / rhs.norm();
    Ok(BoundaryMatch {
        z1: z,
        z2: (t_r / t_l) / z,
        energy: dispersion_energy(t_l, t_r, z),
        iterations,
        residual,
        converged,
    })
}

/// Larger-modulus root of `t_L z² + (t_L t_R + 1 − E²) z + t_R = 0`.
fn larger_root(t_l: f64, t_r: f64, energy: C64) -> C64 {
    let b = t_l * t_r + 1.0 - energy * energy;
    let s = (b * b - 4.0 * t_l * t_r).sqrt();
    let (a, c) = ((-b + s) / (2.0 * t_l), (-b - s) / (2.0 * t_l));
    if a.norm() >= c.norm() {
        a
    } else {
        c
    }
}

/// The `n`-th root of `w` closest to `near`.
fn nearest_root(w: C64, n: f64, near: C64) -> C64 {
    let r = w.norm().powf(1.0 / n);
    let base = w.arg() / n;
    let j = ((near.arg() - base) * n / (2.0 * PI)).round();
    [j - 1.0, j, j + 1.0]
        .iter()
        .map(|&j| Complex64::from_polar(r, base + 2.0 * PI * j / n))
        .min_by(|a, b| (a - near).norm().total_cmp(&(b - near).norm()))
        .expect("three candidates")
}
