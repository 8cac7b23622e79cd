use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use siec_entanglement::{
    effective_corr_matrix, entanglement, occupied_projector, renyi2, truncate, two_band_energies, CorrelationMatrix,
    Cut, EntanglementResult, FermiRule, ImKRule, DEFAULT_EPS_F,
};
use siec_gbz::{critical_params, scale_gbz, standard_radius};
use siec_lattice::{build_chain, build_coupled, BlochModel, Boundary, ChainSpec, CoupledSpec, ModelName};
use siec_spectral::{eig_biorthogonal, phase_rigidity, spectral_gap, EigenSystem};

use crate::{determinism_tag, ExperimentError, ScanRecord, C64};

/// Imaginary-part residual of the entropy above which a record carries a warning.
pub const IM_RESIDUAL_WARNING: f64 = 1e-6;
/// Minimum phase rigidity below which a record carries a conditioning warning.
pub const RIGIDITY_WARNING: f64 = 1e-6;

/// Gauge factors `10^(-1 + i/20)`, `i = 0..=40`, tried on decoupled chains.
const GAUGE_GRID: usize = 41;

/// Where the correlation matrix comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrPath {
    /// Dense diagonalization of the coupled real-space ladder.
    Dense,
    /// Two-component symbol on the scale-dependent GBZ.
    Effective,
}

impl CorrPath {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrPath::Dense => "dense",
            CorrPath::Effective => "effective",
        }
    }
}

impl fmt::Display for CorrPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorrPath {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(CorrPath::Dense),
            "effective" => Ok(CorrPath::Effective),
            _ => Err(format!("unknown path {s:?}, expected dense or effective")),
        }
    }
}

/// Cut as a function of the system size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutRule {
    None,
    /// `[1, ⌊L/2⌋]`.
    Half,
    /// `[1, L−1]`, keeping only the last cell.
    SingleCell,
    /// `⌊L/2⌋` cells starting after `⌊L/4⌋`, away from both edges.
    Centered,
    Interval {
        lo: usize,
        hi: usize,
    },
}

impl CutRule {
    pub fn resolve(self, length: usize) -> Result<Cut, ExperimentError> {
        let cut = match self {
            CutRule::None => Cut::None,
            CutRule::Half => Cut::half(length),
            CutRule::SingleCell => Cut::single_cell(length),
            CutRule::Centered => Cut::Interval { lo: length / 4 + 1, hi: length / 4 + length / 2 },
            CutRule::Interval { lo, hi } => Cut::Interval { lo, hi },
        };
        cut.validate(length)?;
        Ok(cut)
    }

    pub fn label(self) -> String {
        match self {
            CutRule::None => "none".into(),
            CutRule::Half => "half".into(),
            CutRule::SingleCell => "single_cell".into(),
            CutRule::Centered => "centered".into(),
            CutRule::Interval { lo, hi } => format!("interval:{lo}:{hi}"),
        }
    }
}

/// Catalog model and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub name: ModelName,
    pub params: BTreeMap<String, f64>,
}

impl ModelSpec {
    pub fn new(name: ModelName, params: BTreeMap<String, f64>) -> Self {
        Self { name, params }
    }

    pub fn nh_ssh(t_l: f64, t_r: f64) -> Self {
        Self::new(ModelName::NhSsh, siec_lattice::params(&[("t_l", t_l), ("t_r", t_r)]))
    }

    pub fn build(&self) -> Result<BlochModel, ExperimentError> {
        Ok(siec_lattice::predefined(self.name, &self.params)?)
    }

    fn tag_parts(&self) -> Vec<String> {
        let mut parts = vec![self.name.as_str().to_string()];
        parts.extend(self.params.iter().map(|(k, v)| format!("{k}={:016x}", v.to_bits())));
        parts
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub model: ModelSpec,
    pub delta: f64,
    pub lengths: Vec<usize>,
    pub cut: CutRule,
    pub path: CorrPath,
    pub fermi_rule: FermiRule,
    pub eps_f: f64,
    pub im_k: ImKRule,
    /// Keep energies and entanglement spectra alongside the records.
    pub keep_spectra: bool,
}

impl ScanConfig {
    /// Dense path, half cut, strict filling.
    pub fn new(model: ModelSpec, delta: f64, lengths: Vec<usize>) -> Self {
        Self {
            model,
            delta,
            lengths,
            cut: CutRule::Half,
            path: CorrPath::Dense,
            fermi_rule: FermiRule::Strict,
            eps_f: DEFAULT_EPS_F,
            im_k: ImKRule::Scaling,
            keep_spectra: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    pub record: ScanRecord,
    /// Energies of the dense Hamiltonian, or of the symbol on the GBZ for the effective path.
    pub energies: Vec<C64>,
    pub p_spectrum: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DipScan {
    /// In the order of the requested lengths.
    pub points: Vec<ScanPoint>,
    pub l_star: Option<usize>,
    pub s_min: Option<f64>,
    pub failures: usize,
}

impl DipScan {
    pub fn records(&self) -> Vec<ScanRecord> {
        self.points.iter().map(|p| p.record.clone()).collect()
    }
}

/// Evaluates every length in parallel; failures are recorded and the scan continues.
pub fn dip_scan(config: &ScanConfig) -> Result<DipScan, ExperimentError> {
    if config.lengths.is_empty() {
        return Err(ExperimentError::Domain("length range is empty".into()));
    }
    if !(config.delta.is_finite() && config.delta >= 0.0) {
        return Err(ExperimentError::Domain(format!("delta must be >= 0, got {}", config.delta)));
    }
    config.model.build()?;
    let points: Vec<ScanPoint> = config.lengths.par_iter().map(|&l| scan_point(config, l)).collect();
    let failures = points.iter().filter(|p| !p.record.is_ok()).count();
    let best =
        points.iter().filter_map(|p| p.record.s.map(|s| (p.record.length, s))).min_by(|a, b| a.1.total_cmp(&b.1));
    Ok(DipScan { points, l_star: best.map(|b| b.0), s_min: best.map(|b| b.1), failures })
}

struct Evaluation {
    corr: CorrelationMatrix,
    fermi_rule: Option<FermiRule>,
    gap: f64,
    min_r: Option<f64>,
    energies: Vec<C64>,
}

/// One record of a scan. Never fails: errors land in `record.error`.
pub fn scan_point(config: &ScanConfig, length: usize) -> ScanPoint {
    let model = config.model.build().ok();
    let ssh = model.as_ref().and_then(|m| m.ssh_parameters());
    let param =
        |k: &str| ssh.map(|p| if k == "t_l" { p.0 } else { p.1 }).or_else(|| config.model.params.get(k).copied());
    let cut = config.cut.resolve(length).ok();
    let (cut_lo, cut_hi) = match cut.and_then(|c| c.bounds()) {
        Some((lo, hi)) => (Some(lo), Some(hi)),
        None => (None, None),
    };
    let mut tag_parts = config.model.tag_parts();
    tag_parts.extend([
        format!("{:016x}", config.delta.to_bits()),
        length.to_string(),
        config.cut.label(),
        config.path.as_str().into(),
        config.fermi_rule.as_str().into(),
        format!("{:016x}", config.eps_f.to_bits()),
        format!("{:?}", config.im_k),
    ]);
    let mut record = ScanRecord {
        model: config.model.name.as_str().into(),
        t_l: param("t_l"),
        t_r: param("t_r"),
        delta: config.delta,
        length,
        cut_lo,
        cut_hi,
        source: config.path.as_str().into(),
        fermi_rule: None,
        s: None,
        s2: None,
        gap: None,
        min_r: None,
        im_residual: None,
        p_min: None,
        p_max: None,
        l_c_pred: ssh.and_then(|(t_l, t_r)| critical_params(t_l, t_r, config.delta).ok()).map(|c| c.l_c),
        error: None,
        warning: None,
        tag: determinism_tag(&tag_parts),
    };
    let mut energies = Vec::new();
    let mut p_spectrum = Vec::new();
    match evaluate(config, length).and_then(|ev| Ok((entanglement(&ev.corr)?, renyi2(&ev.corr).value, ev))) {
        Ok((ent, s2, ev)) => {
            fill(&mut record, &ent, s2);
            record.fermi_rule = ev.fermi_rule.map(|r| r.as_str().into());
            record.gap = Some(ev.gap);
            record.min_r = ev.min_r;
            if let Some(r) = ev.min_r.filter(|&r| r < RIGIDITY_WARNING) {
                let w = format!("minimum phase rigidity {r:.3e}");
                record.warning = Some(match record.warning.take() {
                    Some(prev) => format!("{prev}; {w}"),
                    None => w,
                });
            }
            if config.keep_spectra {
                energies = ev.energies;
                p_spectrum = ent.p_spectrum;
            }
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    ScanPoint { record, energies, p_spectrum }
}

fn fill(record: &mut ScanRecord, ent: &EntanglementResult, s2: f64) {
    record.s = Some(ent.s);
    record.s2 = Some(s2);
    record.im_residual = Some(ent.im_residual);
    record.p_min = Some(ent.p_min());
    record.p_max = Some(ent.p_max());
    if ent.im_residual > IM_RESIDUAL_WARNING {
        record.warning = Some(format!("entropy imaginary residual {:.3e}", ent.im_residual));
    }
}

fn evaluate(config: &ScanConfig, length: usize) -> Result<Evaluation, ExperimentError> {
    let model = config.model.build()?;
    let cut = config.cut.resolve(length)?;
    match config.path {
        CorrPath::Dense if config.delta == 0.0 => decoupled(config, model, length, cut),
        CorrPath::Dense => {
            let spec = CoupledSpec::new(model, config.delta, length)?;
            let sys = eig_biorthogonal(&build_coupled(&spec)?)?;
            let projector = occupied_projector(&sys, config.fermi_rule, config.eps_f)?;
            Ok(Evaluation {
                corr: truncate(&projector.matrix, cut, spec.layout())?,
                fermi_rule: Some(projector.fermi_rule),
                gap: spectral_gap(&sys)?,
                min_r: Some(phase_rigidity(&sys).min_r),
                energies: sys.energies().to_vec(),
            })
        }
        CorrPath::Effective => {
            let (t_l, t_r) = model.ssh_parameters().ok_or_else(|| {
                ExperimentError::Domain(format!("the effective path needs an nh_ssh-form model, got {}", model.label()))
            })?;
            let corr = effective_corr_matrix(t_l, t_r, config.delta, length, cut, config.im_k)?;
            let gbz = scale_gbz(t_l, t_r, config.delta, length)?;
            let im_k = match config.im_k {
                ImKRule::Scaling => -gbz.radius().ln(),
                ImKRule::Frozen(l0) => gbz.critical.map_or(0.0, |c| c.alpha) / (l0 as f64 + 1.0),
            };
            let mut energies = Vec::with_capacity(2 * gbz.points.len());
            for p in &gbz.points {
                let (occ, unocc) = two_band_energies(&model.evaluate_momentum(C64::new(p.k, im_k))?);
                energies.extend([occ, unocc]);
            }
            let gap = energies.iter().map(|e| e.norm()).fold(f64::INFINITY, f64::min);
            Ok(Evaluation { corr, fermi_rule: None, gap, min_r: None, energies })
        }
    }
}

/// Dense path for `δ = 0`: each chain is diagonalized on its own, in the diagonal gauge
/// `h_m → h_m r^m` that maximizes its minimum phase rigidity, and the projector is
/// assembled block by block. The truncated spectrum does not depend on the gauge;
/// `min_r` is that of the gauged chains.
fn decoupled(config: &ScanConfig, model: BlochModel, length: usize, cut: Cut) -> Result<Evaluation, ExperimentError> {
    let mut gauges: Vec<f64> = (0..GAUGE_GRID).map(|i| 10f64.powf(-1.0 + i as f64 / 20.0)).collect();
    gauges.extend(standard_radius(&model).ok());
    let mut best: Option<(f64, Mat<C64>, EigenSystem)> = None;
    let mut last_err = None;
    for r in gauges {
        let h = build_chain(&ChainSpec::new(model.gauge_rescaled(r)?, length, Boundary::Open)?)?;
        match eig_biorthogonal(&h) {
            Ok(sys) => {
                let min_r = phase_rigidity(&sys).min_r;
                if best.as_ref().map_or(true, |b| min_r > b.0) {
                    best = Some((min_r, h, sys));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let Some((min_r, h, upper)) = best else {
        return Err(last_err.expect("a failed gauge grid has an error").into());
    };
    let lower = eig_biorthogonal(&h.transpose().to_owned())?;
    let blocks = [
        occupied_projector(&upper, config.fermi_rule, config.eps_f)?,
        occupied_projector(&lower, config.fermi_rule, config.eps_f)?,
    ];
    let n = h.nrows();
    let mut p = Mat::<C64>::zeros(2 * n, 2 * n);
    for (b, block) in blocks.iter().enumerate() {
        for j in 0..n {
            for i in 0..n {
                p[(b * n + i, b * n + j)] = block.matrix[(i, j)];
            }
        }
    }
    let spec = CoupledSpec::new(model, 0.0, length)?;
    let rule = (blocks[0].fermi_rule == blocks[1].fermi_rule).then_some(blocks[0].fermi_rule);
    let mut energies = upper.energies().to_vec();
    energies.extend_from_slice(lower.energies());
    Ok(Evaluation {
        corr: truncate(&p, cut, spec.layout())?,
        fermi_rule: rule,
        gap: spectral_gap(&upper)?.min(spectral_gap(&lower)?),
        min_r: Some(min_r.min(phase_rigidity(&lower).min_r)),
        energies,
    })
}
