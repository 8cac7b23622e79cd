use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{dip_scan, ExperimentError, ModelSpec, ScanConfig};

/// Environment variable bounding sweep parallelism.
pub const THREADS_ENV: &str = "SIEC_THREADS";

/// Pool with `threads` workers, else `SIEC_THREADS`, else the rayon default.
pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, ExperimentError> {
    let n = match threads {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| {
                ExperimentError::Domain(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))
            })?,
            Err(_) => 0,
        },
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| ExperimentError::Threads(e.to_string()))
}

/// `(t_L, t_R)` with ratio `t_L/t_R` at fixed product `t_L t_R = 1.44`.
pub fn sweep_hoppings(ratio: f64) -> (f64, f64) {
    let s = ratio.sqrt();
    (1.2 * s, 1.2 / s)
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// `t_L/t_R` values; hoppings follow [`sweep_hoppings`].
    pub ratios: Vec<f64>,
    pub deltas: Vec<f64>,
    /// Template for every cell; its model and δ are replaced.
    pub scan: ScanConfig,
    pub threads: Option<usize>,
}

/// One `(t_L/t_R, δ)` cell of the dip-depth map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub ratio: f64,
    pub delta: f64,
    pub t_l: f64,
    pub t_r: f64,
    /// `None` when no size of the cell could be evaluated.
    pub s_min: Option<f64>,
    pub l_star: Option<usize>,
    pub l_c_pred: Option<f64>,
    pub failures: usize,
    pub error: Option<String>,
}

/// Dip scan per grid cell, ratio-major; cell failures become rows without `s_min`.
pub fn param_sweep(config: &SweepConfig) -> Result<Vec<SweepCell>, ExperimentError> {
    if config.ratios.is_empty() || config.deltas.is_empty() {
        return Err(ExperimentError::Domain("sweep grids must be nonempty".into()));
    }
    if config.scan.lengths.is_empty() {
        return Err(ExperimentError::Domain("length range is empty".into()));
    }
    let grid: Vec<(f64, f64)> =
        config.ratios.iter().flat_map(|&r| config.deltas.iter().map(move |&d| (r, d))).collect();
    let pool = thread_pool(config.threads)?;
    Ok(pool.install(|| grid.par_iter().map(|&(ratio, delta)| sweep_cell(config, ratio, delta)).collect()))
}

fn sweep_cell(config: &SweepConfig, ratio: f64, delta: f64) -> SweepCell {
    let (t_l, t_r) = sweep_hoppings(ratio);
    let scan = ScanConfig { model: ModelSpec::nh_ssh(t_l, t_r), delta, ..config.scan.clone() };
    let mut cell = SweepCell {
        ratio,
        delta,
        t_l,
        t_r,
        s_min: None,
        l_star: None,
        l_c_pred: siec_gbz::critical_params(t_l, t_r, delta).ok().map(|c| c.l_c),
        failures: 0,
        error: None,
    };
    match dip_scan(&scan) {
        Ok(result) => {
            cell.s_min = result.s_min;
            cell.l_star = result.l_star;
            cell.failures = result.failures;
            if result.s_min.is_none() {
                cell.error = result.points.iter().find_map(|p| p.record.error.clone());
            }
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}
