use std::f64::consts::PI;

use num_complex::Complex64;
use siec_lattice::BlochModel;

use crate::roots::characteristic_laurent;
use crate::{GbzError, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Standard,
    ScaleDependent,
    Numeric,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Standard => "standard",
            Regime::ScaleDependent => "scale_dependent",
            Regime::Numeric => "numeric",
        }
    }
}

/// Which closed-form radius a scale-dependent GBZ used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `L ≤ L′`: radius `sqrt(t_R/t_L)`.
    Weak,
    /// `L > L′`: radius `e^{−α/(L+1)}`.
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalParams {
    pub alpha: f64,
    pub l_prime: f64,
    pub l_c: f64,
    pub k_c: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GbzPoint {
    pub m: usize,
    pub k: f64,
    pub z: C64,
    /// Complex momentum `K = −i log z` with `Re K = k`.
    pub momentum: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GbzResult {
    pub points: Vec<GbzPoint>,
    pub length: usize,
    pub regime: Regime,
    pub branch: Option<Branch>,
    pub critical: Option<CriticalParams>,
    pub flags: Vec<String>,
}

impl GbzResult {
    fn on_circle(length: usize, radius: f64, regime: Regime) -> Self {
        let points = k_grid(length)
            .into_iter()
            .enumerate()
            .map(|(i, k)| GbzPoint {
                m: i + 1,
                k,
                z: Complex64::from_polar(radius, k),
                momentum: Complex64::new(k, -radius.ln()),
            })
            .collect();
        Self { points, length, regime, branch: None, critical: None, flags: Vec::new() }
    }

    /// Common radius of the points (the first point's modulus).
    pub fn radius(&self) -> f64 {
        self.points.first().map_or(f64::NAN, |p| p.z.norm())
    }
}

/// `k = 2πm/(L+1)` for `m = 1..=L`.
pub fn k_grid(length: usize) -> Vec<f64> {
    (1..=length).map(|m| 2.0 * PI * m as f64 / (length as f64 + 1.0)).collect()
}

/// Radius of the single-chain GBZ for models whose characteristic polynomial is
/// `c₋₁ z⁻¹ + c₀(E) + c₁ z`, where `|z₁| = |z₂|` forces `|z| = sqrt|c₋₁/c₁|`.
pub fn standard_radius(model: &BlochModel) -> Result<f64, GbzError> {
    let probes = [Complex64::new(0.0, 0.0), Complex64::new(0.7, 0.3)];
    let polys: Vec<_> = probes.iter().map(|&e| characteristic_laurent(model, e)).collect();
    let two_root = polys.iter().all(|p| p.low == -1 && p.high() == 1)
        && (polys[0].coeffs[0] - polys[1].coeffs[0]).norm() == 0.0
        && (polys[0].coeffs[2] - polys[1].coeffs[2]).norm() == 0.0;
    if !two_root {
        return Err(GbzError::Unsupported(format!(
            "{} is outside the two-root closed-form family; use gbz_from_spectrum",
            model.label()
        )));
    }
    Ok((polys[0].coeffs[0].norm() / polys[0].coeffs[2].norm()).sqrt())
}

pub fn standard_gbz(model: &BlochModel, length: usize) -> Result<GbzResult, GbzError> {
    check_length(length)?;
    let r = standard_radius(model)?;
    Ok(GbzResult::on_circle(length, r, Regime::Standard))
}

/// Critical parameters of the coupled chains.
pub fn critical_params(t_l: f64, t_r: f64, delta: f64) -> Result<CriticalParams, GbzError> {
    for (name, v) in [("t_l", t_l), ("t_r", t_r)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(GbzError::Domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(GbzError::Domain(format!("delta must be positive and finite, got {delta}")));
    }
    let alpha0 = t_r * (t_r - t_l) / (t_l * (t_r - 1.0));
    let alpha = -(delta * alpha0).abs().ln();
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(GbzError::Domain(format!(
            "alpha = {alpha} is not positive: delta = {delta} is too large for the weak-coupling expansion"
        )));
    }
    let l_prime = -alpha / (t_r / t_l).sqrt().ln() - 1.0;
    let l_c = -alpha / t_r.ln() - 1.0;
    let k_c = Complex64::new(PI, alpha / (l_c + 1.0));
    Ok(CriticalParams { alpha, l_prime, l_c, k_c })
}

pub fn scale_gbz(t_l: f64, t_r: f64, delta: f64, length: usize) -> Result<GbzResult, GbzError> {
    check_length(length)?;
    let params = critical_params(t_l, t_r, delta)?;
    let (radius, branch) = if (length as f64) <= params.l_prime {
        ((t_r / t_l).sqrt(), Branch::Weak)
    } else {
        ((-params.alpha / (length as f64 + 1.0)).exp(), Branch::Strong)
    };
    let mut out = GbzResult::on_circle(length, radius, Regime::ScaleDependent);
    out.branch = Some(branch);
    out.critical = Some(params);
    if !(0.0 < t_r && t_r < 1.0 && 1.0 < t_l) {
        out.flags.push(format!("outside_studied_regime: expected 0 < t_r < 1 < t_l, got t_l = {t_l}, t_r = {t_r}"));
    }
    Ok(out)
}

/// `Δ_K = (k − π) + iα(1/(L+1) − 1/(L_c+1))`, the distance of `K(k)` from `K_c`.
pub fn delta_k(k: f64, length: f64, gbz: &GbzResult) -> Result<C64, GbzError> {
    let c = gbz.critical.ok_or_else(|| GbzError::Unsupported("delta_k needs a scale-dependent GBZ".into()))?;
    Ok(Complex64::new(k - PI, c.alpha * (1.0 / (length + 1.0) - 1.0 / (c.l_c + 1.0))))
}

fn check_length(length: usize) -> Result<(), GbzError> {
    if length == 0 {
        return Err(GbzError::Domain("length must be at least 1".into()));
    }
    Ok(())
}
