use std::path::PathBuf;

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use siec_experiments::{
    build_doubled, dip_scan, log_scaling_fit, measurement_identity_check, param_sweep, thread_pool, ScanConfig,
    SweepConfig, C64,
};
use siec_gbz::scale_gbz;
use siec_lattice::{build_chain, build_coupled, Boundary, ChainSpec, CoupledSpec};

use crate::output::{
    complex_json, csv_text, entropy_row, fmt_f64, fmt_opt_f64, spectra_file_name, spectra_json, with_files,
    write_records, RunDir, ENTROPY_COLUMNS, GBZ_COLUMNS, SCHEMA_VERSION, SWEEP_COLUMNS,
};
use crate::{CliError, Command, MeasurementBase, RunConfig};

/// Linear-algebra backend recorded in `meta.json`.
pub const BACKEND: &str = "faer 0.24 dense complex eigensolver, f64";
/// Largest `|lhs − rhs| / ‖A‖_F` accepted by `verify-measurement`.
pub const MEASUREMENT_TOLERANCE: f64 = 1e-7;

const BASELINE_COLUMNS: [&str; 3] = ["baseline", "L", "S"];
const FIT_COLUMNS: [&str; 9] =
    ["baseline", "slope", "intercept", "r2", "points", "boundary", "cut", "fermi_rule", "gauge"];
const MEASUREMENT_COLUMNS: [&str; 8] =
    ["trial", "re_lhs", "im_lhs", "re_rhs", "im_rhs", "abs_error", "rel_error", "occupied_states"];

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// The `result` object of `meta.json`.
    pub summary: Value,
}

/// Runs one command and writes its run directory.
pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let pool = thread_pool(config.threads)?;
    pool.install(|| match config.command {
        Command::Gbz => gbz(config),
        Command::Entropy => scan(config, true),
        Command::DipScan => scan(config, false),
        Command::Sweep => sweep(config),
        Command::Baselines => baselines(config),
        Command::VerifyMeasurement => verify_measurement(config),
    })
}

fn meta(config: &RunConfig, result: &Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": config.command.as_str(),
        "version": env!("CARGO_PKG_VERSION"),
        "backend": BACKEND,
        "config": config.to_json(),
        "result": result,
    })
}

fn scan_config(config: &RunConfig) -> ScanConfig {
    ScanConfig {
        cut: config.cut,
        path: config.path,
        fermi_rule: config.fermi_rule,
        eps_f: config.eps_f,
        im_k: config.im_k,
        keep_spectra: config.emit_spectra,
        ..ScanConfig::new(config.model_spec(), config.delta.unwrap_or(0.0), config.lengths.clone())
    }
}

fn scan(config: &RunConfig, entropy_table: bool) -> Result<RunOutcome, CliError> {
    let result = dip_scan(&scan_config(config))?;
    let summary = json!({
        "l_star": result.l_star,
        "s_min": result.s_min,
        "failures": result.failures,
        "points": result.points.len(),
    });
    let files = if entropy_table {
        let mut run = RunDir::create(&config.output_dir)?;
        let rows: Vec<Vec<String>> = result.points.iter().map(|p| entropy_row(&p.record)).collect();
        run.write("entropy.csv", &csv_text(&ENTROPY_COLUMNS, &rows)?)?;
        if config.emit_spectra {
            for p in &result.points {
                run.write_json(&spectra_file_name(p.record.length), &spectra_json(p))?;
            }
        }
        let meta = with_files(meta(config, &summary), &run, "entropy.csv", &ENTROPY_COLUMNS);
        run.write_json("meta.json", &meta)?;
        run.written().to_vec()
    } else {
        write_records(&result.points, &config.output_dir, config.emit_spectra, meta(config, &summary))?
    };
    if result.s_min.is_none() {
        let reason = result.points.iter().find_map(|p| p.record.error.clone()).unwrap_or_default();
        return Err(CliError::Computation(format!("all {} sizes failed; first error: {reason}", result.points.len())));
    }
    Ok(RunOutcome { files, summary })
}

fn gbz(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let (t_l, t_r) = config.hoppings().ok_or_else(|| CliError::Usage("gbz needs model nh_ssh".into()))?;
    let delta = config.delta.ok_or_else(|| CliError::Usage("gbz needs delta".into()))?;
    let mut run = RunDir::create(&config.output_dir)?;
    let mut sizes = Vec::new();
    for &length in &config.lengths {
        let g = scale_gbz(t_l, t_r, delta, length).map_err(siec_experiments::ExperimentError::from)?;
        let rows: Vec<Vec<String>> = g
            .points
            .iter()
            .map(|p| {
                vec![
                    p.m.to_string(),
                    fmt_f64(p.k),
                    fmt_f64(p.z.re),
                    fmt_f64(p.z.im),
                    fmt_f64(p.z.norm()),
                    g.regime.as_str().to_string(),
                ]
            })
            .collect();
        run.write(&format!("gbz_L{length}.csv"), &csv_text(&GBZ_COLUMNS, &rows)?)?;
        let c = g.critical;
        run.write_json(
            &format!("gbz_L{length}.json"),
            &json!({
                "schema_version": SCHEMA_VERSION,
                "length": length,
                "t_l": t_l,
                "t_r": t_r,
                "delta": delta,
                "regime": g.regime.as_str(),
                "branch": g.branch.map(|b| format!("{b:?}").to_lowercase()),
                "radius": g.points.first().map(|p| p.z.norm()),
                "alpha": c.map(|c| c.alpha),
                "l_prime": c.map(|c| c.l_prime),
                "l_c": c.map(|c| c.l_c),
                "k_c": c.map(|c| complex_json(c.k_c)),
                "flags": g.flags,
            }),
        )?;
        sizes.push(json!({ "length": length, "regime": g.regime.as_str(), "points": g.points.len() }));
    }
    let summary = json!({ "sizes": sizes });
    let meta = with_files(meta(config, &summary), &run, "gbz_L{n}.csv", &GBZ_COLUMNS);
    run.write_json("meta.json", &meta)?;
    Ok(RunOutcome { files: run.written().to_vec(), summary })
}

fn sweep(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let cells = param_sweep(&SweepConfig {
        ratios: config.ratios.clone(),
        deltas: config.deltas.clone(),
        scan: ScanConfig { keep_spectra: false, ..scan_config(config) },
        threads: config.threads,
    })?;
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| {
            vec![
                fmt_f64(c.ratio),
                fmt_f64(c.delta),
                fmt_f64(c.t_l),
                fmt_f64(c.t_r),
                fmt_opt_f64(c.s_min),
                c.l_star.map_or_else(String::new, |l| l.to_string()),
                fmt_opt_f64(c.l_c_pred),
                c.failures.to_string(),
                c.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut run = RunDir::create(&config.output_dir)?;
    run.write("sweep.csv", &csv_text(&SWEEP_COLUMNS, &rows)?)?;
    let failed = cells.iter().filter(|c| c.s_min.is_none()).count();
    let deepest = cells
        .iter()
        .filter_map(|c| c.s_min.map(|s| (s, c)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(s, c)| json!({ "s_min": s, "ratio": c.ratio, "delta": c.delta, "l_star": c.l_star }));
    let summary = json!({ "cells": cells.len(), "failed_cells": failed, "deepest": deepest });
    let meta = with_files(meta(config, &summary), &run, "sweep.csv", &SWEEP_COLUMNS);
    run.write_json("meta.json", &meta)?;
    Ok(RunOutcome { files: run.written().to_vec(), summary })
}

fn baselines(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let mut points = Vec::new();
    let mut fits = Vec::new();
    let mut fit_json = Vec::new();
    for &b in &config.baselines {
        let lengths = if config.lengths.is_empty() { b.default_lengths() } else { config.lengths.clone() };
        let conv = b.convention();
        let fit = log_scaling_fit(b, &lengths, &conv)?;
        for (l, s) in fit.lengths.iter().zip(&fit.entropies) {
            points.push(vec![b.as_str().to_string(), l.to_string(), fmt_f64(*s)]);
        }
        let boundary = format!("{:?}", conv.boundary).to_lowercase();
        fits.push(vec![
            b.as_str().to_string(),
            fmt_f64(fit.fit.slope),
            fmt_f64(fit.fit.intercept),
            fmt_f64(fit.fit.r2),
            fit.fit.points.to_string(),
            boundary.clone(),
            conv.cut.label(),
            conv.fermi_rule.as_str().to_string(),
            fmt_opt_f64(conv.gauge),
        ]);
        fit_json.push(json!({
            "baseline": b.as_str(),
            "slope": fit.fit.slope,
            "intercept": fit.fit.intercept,
            "r2": fit.fit.r2,
            "points": fit.fit.points,
            "boundary": boundary,
        }));
    }
    let mut run = RunDir::create(&config.output_dir)?;
    run.write("baselines.csv", &csv_text(&BASELINE_COLUMNS, &points)?)?;
    run.write("baseline_fits.csv", &csv_text(&FIT_COLUMNS, &fits)?)?;
    let summary = json!({ "fits": fit_json });
    let meta = with_files(meta(config, &summary), &run, "baselines.csv", &BASELINE_COLUMNS);
    run.write_json("meta.json", &meta)?;
    Ok(RunOutcome { files: run.written().to_vec(), summary })
}

fn verify_measurement(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let settings = &config.measurement;
    let model = config.model_spec().build()?;
    let length = config.lengths[0];
    let base = match settings.base {
        MeasurementBase::Coupled => {
            let delta = config.delta.ok_or_else(|| CliError::Usage("the coupled base needs delta".into()))?;
            build_coupled(&CoupledSpec::new(model, delta, length).map_err(siec_experiments::ExperimentError::from)?)
        }
        MeasurementBase::Chain => build_chain(
            &ChainSpec::new(model, length, Boundary::Open).map_err(siec_experiments::ExperimentError::from)?,
        ),
    }
    .map_err(siec_experiments::ExperimentError::from)?;
    let doubled = build_doubled(&base, settings.eta)?;
    let n = base.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut rows = Vec::with_capacity(settings.operators);
    let mut worst = 0.0_f64;
    let mut worst_lambda = 0.0_f64;
    for trial in 0..settings.operators {
        let a = Mat::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let check = measurement_identity_check(&doubled, &a)?;
        let rel = check.abs_error / a.norm_l2();
        worst = worst.max(rel);
        for e in &check.entries {
            worst_lambda = worst_lambda.max((e.lambda - e.biorthogonal_overlap).norm());
        }
        rows.push(vec![
            trial.to_string(),
            fmt_f64(check.lhs.re),
            fmt_f64(check.lhs.im),
            fmt_f64(check.rhs.re),
            fmt_f64(check.rhs.im),
            fmt_f64(check.abs_error),
            fmt_f64(rel),
            check.occupied_states.to_string(),
        ]);
    }
    let mut run = RunDir::create(&config.output_dir)?;
    run.write("measurement.csv", &csv_text(&MEASUREMENT_COLUMNS, &rows)?)?;
    let pass = worst < MEASUREMENT_TOLERANCE;
    let summary = json!({
        "operators": settings.operators,
        "max_rel_error": worst,
        "max_lambda_overlap_error": worst_lambda,
        "tolerance": MEASUREMENT_TOLERANCE,
        "pass": pass,
    });
    let meta = with_files(meta(config, &summary), &run, "measurement.csv", &MEASUREMENT_COLUMNS);
    run.write_json("meta.json", &meta)?;
    if !pass {
        return Err(CliError::Computation(format!(
            "measurement identity off by {worst:.3e} relative, above {MEASUREMENT_TOLERANCE:e}"
        )));
    }
    Ok(RunOutcome { files: run.written().to_vec(), summary })
}
