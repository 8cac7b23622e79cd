use rayon::prelude::*;
use siec_gbz::{bloch_spectrum_on, char_poly_roots, gbz_from_spectrum, scale_gbz, RootRule};
use siec_lattice::{build_coupled, nh_ssh, CoupledSpec};
use siec_spectral::eigenvalues;

use crate::{dip_scan, DipScan, ExperimentError, ModelSpec, ScanConfig, C64};

/// `|Re E|` at or below this counts as a zero mode when locating the gap closing.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-9;

/// Numerical GBZ of the dense coupled spectrum at one size.
#[derive(Clone, Debug, PartialEq)]
pub struct GbzSnapshot {
    pub length: usize,
    pub energies: Vec<C64>,
    /// One root per energy; `None` where the root solve failed.
    pub points: Vec<Option<C64>>,
    /// Roots of `det H(z) = 0`, where the bands touch at `E = 0`.
    pub closing_points: Vec<C64>,
    /// Smallest distance from a GBZ point to a closing point.
    pub min_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralDips {
    pub scan: DipScan,
    pub snapshots: Vec<GbzSnapshot>,
    /// Snapshot size whose GBZ comes closest to a closing point.
    pub closest_length: Option<usize>,
    /// Whether `closest_length` lies within two sizes of the entropy minimum.
    pub approaches_closing: Option<bool>,
}

/// Dense dip scan of a coupled catalog model plus GBZ snapshots at `snapshot_lengths`.
pub fn general_model_dips(config: &ScanConfig, snapshot_lengths: &[usize]) -> Result<GeneralDips, ExperimentError> {
    let model = config.model.build()?;
    let mut lengths = config.lengths.clone();
    for &l in snapshot_lengths {
        if !lengths.contains(&l) {
            lengths.push(l);
        }
    }
    let scan = dip_scan(&ScanConfig { lengths, keep_spectra: true, ..config.clone() })?;
    let closing_points = char_poly_roots(&model, C64::new(0.0, 0.0)).map(|r| r.roots).unwrap_or_default();
    let snapshots: Vec<GbzSnapshot> = snapshot_lengths
        .iter()
        .filter_map(|&l| scan.points.iter().find(|p| p.record.length == l && !p.energies.is_empty()))
        .map(|p| {
            let points = gbz_from_spectrum(&model, &p.energies, RootRule::default());
            let min_distance = points
                .iter()
                .flatten()
                .flat_map(|z| closing_points.iter().map(move |c| (z - c).norm()))
                .reduce(f64::min);
            GbzSnapshot {
                length: p.record.length,
                energies: p.energies.clone(),
                points,
                closing_points: closing_points.clone(),
                min_distance,
            }
        })
        .collect();
    let closest_length = snapshots
        .iter()
        .filter_map(|s| s.min_distance.map(|d| (s.length, d)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|b| b.0);
    let approaches_closing = closest_length.zip(scan.l_star).map(|(c, l)| c.abs_diff(l) <= 2);
    let mut scan = scan;
    let requested = &config.lengths;
    scan.points.retain(|p| requested.contains(&p.record.length));
    if !config.keep_spectra {
        for p in &mut scan.points {
            p.energies.clear();
            p.p_spectrum.clear();
        }
    }
    Ok(GeneralDips { scan, snapshots, closest_length, approaches_closing })
}

/// Smallest size whose dense coupled spectrum has a zero mode (`|Re E| ≤ ZERO_MODE_TOLERANCE`).
pub fn gap_closing_size(model: &ModelSpec, delta: f64, lengths: &[usize]) -> Result<Option<usize>, ExperimentError> {
    let bloch = model.build()?;
    let closed = lengths
        .par_iter()
        .map(|&l| {
            let m = build_coupled(&CoupledSpec::new(bloch.clone(), delta, l)?)?;
            Ok(eigenvalues(&m)?.iter().any(|e| e.re.abs() <= ZERO_MODE_TOLERANCE))
        })
        .collect::<Result<Vec<bool>, ExperimentError>>()?;
    let mut sorted: Vec<(usize, bool)> = lengths.iter().copied().zip(closed).collect();
    sorted.sort_unstable();
    Ok(sorted.into_iter().find(|p| p.1).map(|p| p.0))
}

/// Hausdorff distance between the dense coupled spectrum and `E(z)` on the
/// scale-dependent GBZ, with the spectral radius of the dense spectrum.
pub fn gbz_spectrum_distance(t_l: f64, t_r: f64, delta: f64, length: usize) -> Result<(f64, f64), ExperimentError> {
    let model = nh_ssh(t_l, t_r)?;
    let gbz = scale_gbz(t_l, t_r, delta, length)?;
    let zs: Vec<C64> = gbz.points.iter().map(|p| p.z).collect();
    let predicted = bloch_spectrum_on(&model, &zs)?;
    let dense = eigenvalues(&build_coupled(&CoupledSpec::new(model, delta, length)?)?)?;
    let radius = dense.iter().map(|e| e.norm()).fold(0.0, f64::max);
    Ok((crate::hausdorff(&predicted, &dense), radius))
}
