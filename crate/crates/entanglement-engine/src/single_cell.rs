use std::f64::consts::PI;

use num_complex::Complex64;
use siec_gbz::critical_params;

use crate::{EntanglementError, C64};

/// Adjustable constants `O` (added to `a`) and `O′` (added to the constant term of `S`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Offsets {
    pub o: f64,
    pub o_prime: f64,
}

impl Default for Offsets {
    fn default() -> Self {
        Self { o: 0.14, o_prime: -0.035 }
    }
}

/// Analytic single-cell truncated projector near the critical size.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleCellApprox {
    pub p_pm: C64,
    pub p_mp: C64,
    /// `½ ± sqrt(P̃⁺⁻ P̃⁻⁺)`, minus sign first.
    pub p_tilde: [C64; 2],
    pub a: f64,
    pub b: f64,
    pub s_approx: f64,
    pub l_c: f64,
    /// `false` when `L ≥ L_c` and only the size-independent terms were kept.
    pub divergent_branch: bool,
}

pub fn single_cell_approx(
    t_l: f64,
    t_r: f64,
    delta: f64,
    length: usize,
    offsets: Offsets,
) -> Result<SingleCellApprox, EntanglementError> {
    let c = critical_params(t_l, t_r, delta)?;
    let l = length as f64;
    let q = ((t_l + 1.0) * (t_r + 1.0)).sqrt();
    let a = q / (2.0 * PI * (t_r * t_l).sqrt()) + offsets.o;
    let b = 0.25 * t_r / t_l * ((t_l / t_r - 1.0 / (t_r * t_r)) / c.alpha).sqrt();
    let divergent_branch = l < c.l_c;
    let inv_sqrt = if divergent_branch { (c.l_c - l).powf(-0.5) } else { 0.0 };
    let p_pm =
        Complex64::new((t_l * t_r - 1.0).sqrt() / (2.0 * c.alpha.sqrt() * t_r) * inv_sqrt + q / (2.0 * PI * t_r), 0.0);
    let p_mp = Complex64::new(q / (2.0 * PI * t_l), 0.0);
    let root = (p_pm * p_mp).sqrt();
    let s_approx = 2.0 * ((b * (0.5 - a).ln() - 2.0 * a * b) * inv_sqrt + 0.25 + a * a + offsets.o_prime);
    Ok(SingleCellApprox { p_pm, p_mp, p_tilde: [0.5 - root, 0.5 + root], a, b, s_approx, l_c: c.l_c, divergent_branch })
}
