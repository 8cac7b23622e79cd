use std::fmt;

use faer::Mat;
use siec_spectral::EigenSystem;

use crate::{EntanglementError, C64};

pub const DEFAULT_EPS_F: f64 = 1e-12;

/// How states are assigned to the occupied band.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FermiRule {
    /// Occupy `Re E < −ε_F`; any `|Re E| ≤ ε_F` is an error.
    Strict,
    /// Occupy exactly half the states by ascending `Re E`, ties by ascending `Im E`.
    HalfFilling,
    /// Occupy `Re E < −ε_F` and leave zero modes empty.
    NegativeOnly,
}

impl FermiRule {
    pub fn as_str(self) -> &'static str {
        match self {
            FermiRule::Strict => "strict",
            FermiRule::HalfFilling => "half_filling",
            FermiRule::NegativeOnly => "negative_only",
        }
    }
}

impl fmt::Display for FermiRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FermiRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [FermiRule::Strict, FermiRule::HalfFilling, FermiRule::NegativeOnly]
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown fermi rule {s:?}"))
    }
}

/// Biorthogonal projector onto the occupied states.
#[derive(Clone, Debug)]
pub struct OccupiedProjector {
    pub matrix: Mat<C64>,
    pub occupied: Vec<usize>,
    /// Rule that actually decided the filling: `strict` when no state had `|Re E| ≤ ε_F`
    /// and the requested rule agreed with the strict assignment.
    pub fermi_rule: FermiRule,
    pub zero_modes: usize,
}

impl OccupiedProjector {
    pub fn occupied_count(&self) -> usize {
        self.occupied.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `‖P² − P‖_F`.
    pub fn idempotence_error(&self) -> f64 {
        (&(&self.matrix * &self.matrix) - &self.matrix).norm_l2()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }
}

pub fn occupied_projector(
    eigsys: &EigenSystem,
    rule: FermiRule,
    eps_f: f64,
) -> Result<OccupiedProjector, EntanglementError> {
    let energies = eigsys.energies();
    let zero_modes = energies.iter().filter(|e| e.re.abs() <= eps_f).count();
    let negative: Vec<usize> = (0..energies.len()).filter(|&n| energies[n].re < -eps_f).collect();
    let (occupied, effective) = match rule {
        FermiRule::Strict if zero_modes > 0 => {
            return Err(EntanglementError::ZeroModes { count: zero_modes, eps_f });
        }
        FermiRule::Strict => (negative, FermiRule::Strict),
        FermiRule::NegativeOnly => (negative, if zero_modes > 0 { FermiRule::NegativeOnly } else { FermiRule::Strict }),
        FermiRule::HalfFilling => {
            if energies.len() % 2 == 1 {
                return Err(EntanglementError::Domain(format!(
                    "half filling needs an even number of states, got {}",
                    energies.len()
                )));
            }
            let mut order: Vec<usize> = (0..energies.len()).collect();
            let key = |e: C64| if e.re.abs() <= eps_f { 0.0 } else { e.re };
            order.sort_by(|&a, &b| {
                let (ea, eb) = (energies[a], energies[b]);
                key(ea).total_cmp(&key(eb)).then(ea.im.total_cmp(&eb.im))
            });
            order.truncate(energies.len() / 2);
            order.sort_unstable();
            let effective =
                if zero_modes == 0 && order == negative { FermiRule::Strict } else { FermiRule::HalfFilling };
            (order, effective)
        }
    };
    if let Some(&n) = occupied.iter().find(|&&n| eigsys.defective_flags()[n]) {
        return Err(EntanglementError::Defective { index: n, energy: energies[n] });
    }
    Ok(OccupiedProjector { matrix: eigsys.projector_onto(&occupied), occupied, fermi_rule: effective, zero_modes })
}
