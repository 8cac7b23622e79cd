//! One PASS/FAIL line per primary acceptance criterion.
//!
//! Failing criteria are reported, not asserted: the process exits 0 so that the
//! workspace test run stays usable while known gaps remain visible here.

use std::f64::consts::PI;
use std::time::Instant;

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siec_entanglement::{
    entanglement, occupied_projector, projector_symbol, single_cell_approx, truncate, Cut, FermiRule, ImKRule, Offsets,
    DEFAULT_EPS_F,
};
use siec_experiments::{
    build_doubled, dip_depth, dip_scan, gap_closing_size, gbz_spectrum_distance, jump_kink, linear_fit,
    log_scaling_fit, measurement_identity_check, Baseline, CorrPath, CutRule, ModelSpec, Parity, ScanConfig, C64,
};
use siec_gbz::{char_poly_roots, critical_params, scale_gbz};
use siec_lattice::{build_chain, build_coupled, nh_ssh, Boundary, ChainSpec, CoupledSpec};
use siec_spectral::eig_biorthogonal;

const DELTA: f64 = 1.6e-3;

fn hoppings() -> (f64, f64) {
    (1.2 * 0.3_f64.exp(), 1.2 * (-0.3_f64).exp())
}

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn dense_scan(delta: f64, lengths: Vec<usize>, cut: CutRule) -> siec_experiments::DipScan {
    let (t_l, t_r) = hoppings();
    let mut config = ScanConfig::new(ModelSpec::nh_ssh(t_l, t_r), delta, lengths);
    config.fermi_rule = FermiRule::HalfFilling;
    config.cut = cut;
    config.keep_spectra = true;
    dip_scan(&config).expect("dense scan")
}

fn effective_scan(lengths: Vec<usize>, im_k: ImKRule) -> siec_experiments::DipScan {
    let (t_l, t_r) = hoppings();
    let mut config = ScanConfig::new(ModelSpec::nh_ssh(t_l, t_r), DELTA, lengths);
    config.path = CorrPath::Effective;
    config.im_k = im_k;
    dip_scan(&config).expect("effective scan")
}

fn critical_size() -> Outcome {
    let (t_l, t_r) = hoppings();
    let l_c = scale_gbz(t_l, t_r, DELTA, 40).unwrap().critical.unwrap().l_c;
    let scan = dense_scan(DELTA, (30..=50).collect(), CutRule::Half);
    let l_star = scan.l_star.unwrap();
    let pass = (l_c - 42.79).abs() <= 0.05 && (l_star as f64 - l_c).abs() <= 3.0;
    outcome(pass, format!("L_c = {l_c:.4} (42.79 ± 0.05), dense L* = {l_star} with S = {:.4}", scan.s_min.unwrap()))
}

fn delta_curve() -> Outcome {
    let (t_l, t_r) = hoppings();
    let deltas: Vec<f64> = (0..10).map(|i| 8e-4 + (3e-3 - 8e-4) * i as f64 / 9.0).collect();
    let l_c: Vec<f64> = deltas.iter().map(|&d| critical_params(t_l, t_r, d).unwrap().l_c).collect();
    let decreasing = l_c.windows(2).all(|w| w[1] < w[0]);
    let mut worst = 0.0_f64;
    let mut misses = Vec::new();
    for (&d, &lc) in deltas.iter().zip(&l_c) {
        let closing = gap_closing_size(&ModelSpec::nh_ssh(t_l, t_r), d, &(20..=70).collect::<Vec<_>>()).unwrap();
        match closing {
            Some(l) => {
                let dev = (l as f64 - lc).abs();
                worst = worst.max(dev);
                if dev > 3.0 {
                    misses.push(format!("δ={d:.2e}: {l} vs {lc:.2}"));
                }
            }
            None => misses.push(format!("δ={d:.2e}: no closing in [20, 70]")),
        }
    }
    outcome(
        decreasing && misses.is_empty(),
        format!("strictly decreasing: {decreasing}, worst |L_closing − L_c| = {worst:.2} over 10 δ {misses:?}"),
    )
}

fn dip_depth_criterion() -> Outcome {
    let a = dense_scan(1.6843e-3, (30..=50).collect(), CutRule::Half);
    let b = dense_scan(1.68441635e-3, (30..=50).collect(), CutRule::Half);
    let (sa, sb) = (a.s_min.unwrap(), b.s_min.unwrap());
    outcome(
        sa <= -3.0 && sb <= -4.0,
        format!(
            "S_min = {sa:.4} at L = {} (≤ −3), S_min = {sb:.4} at L = {} (≤ −4)",
            a.l_star.unwrap(),
            b.l_star.unwrap()
        ),
    )
}

fn scaling_law() -> Outcome {
    let (t_l, t_r) = hoppings();
    let l_c = critical_params(t_l, t_r, DELTA).unwrap().l_c;
    let lengths: Vec<usize> =
        (1..=60).filter(|&l| l % 2 == 1 && l as f64 >= l_c - 12.0 && l as f64 <= l_c - 2.0).collect();
    let scan = effective_scan(lengths.clone(), ImKRule::Scaling);
    let xs: Vec<f64> = lengths.iter().map(|&l| (l_c - l as f64).powf(-0.5)).collect();
    let ys: Vec<f64> = scan.points.iter().map(|p| p.record.s.unwrap()).collect();
    let fit = linear_fit(&xs, &ys, 3).unwrap();
    outcome(fit.r2 >= 0.95, format!("odd L {lengths:?}: R² = {:.4}, slope = {:.4}", fit.r2, fit.slope))
}

fn gbz_agreement() -> Outcome {
    let (t_l, t_r) = hoppings();
    let mut parts = Vec::new();
    let mut pass = true;
    for l in [20, 30, 40, 50, 60] {
        let (d, radius) = gbz_spectrum_distance(t_l, t_r, DELTA, l).unwrap();
        let rel = d / radius;
        pass &= rel <= 0.05;
        parts.push(format!("L={l}: {:.1}%", 100.0 * rel));
    }
    outcome(pass, format!("Hausdorff / spectral radius (≤ 5%): {}", parts.join(", ")))
}

fn baselines() -> Outcome {
    let fit = |b: Baseline| log_scaling_fit(b, &b.default_lengths(), &b.convention()).unwrap().fit;
    let (h, n, e) = (fit(Baseline::HermitianCritical), fit(Baseline::NhseS11), fit(Baseline::EpS11));
    let pass = (h.slope - 1.0 / 3.0).abs() <= 0.15 / 3.0 && n.slope > 0.0 && n.r2 >= 0.95 && e.slope < 0.0;
    outcome(
        pass,
        format!(
            "hermitian slope {:.4} (1/3 ± 15%), nhse slope {:.4} R² {:.4}, ep slope {:.4}",
            h.slope, n.slope, n.r2, e.slope
        ),
    )
}

fn property_suite() -> Outcome {
    let (t_l, t_r) = hoppings();
    let model = nh_ssh(t_l, t_r).unwrap();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut idem = 0.0_f64;
    let mut biorth = 0.0_f64;
    let mut gauge = 0.0_f64;
    let mut no_cut = 0.0_f64;
    for l in [10, 20, 30, 41] {
        let spec = CoupledSpec::new(model.clone(), DELTA, l).unwrap();
        let sys = eig_biorthogonal(&build_coupled(&spec).unwrap()).unwrap();
        biorth = biorth.max(sys.biorthonormality_error());
        let p = occupied_projector(&sys, FermiRule::Strict, DEFAULT_EPS_F).unwrap();
        idem = idem.max(p.idempotence_error());
        let s = |m: &Mat<C64>, cut: Cut| entanglement(&truncate(m, cut, spec.layout()).unwrap()).unwrap().s;
        no_cut = no_cut.max(s(&p.matrix, Cut::None).abs());
        let factors: Vec<C64> =
            (0..sys.len()).map(|_| C64::from_polar(rng.random_range(0.2..5.0), rng.random_range(-PI..PI))).collect();
        let gauged = occupied_projector(&sys.rescaled(&factors).unwrap(), FermiRule::Strict, DEFAULT_EPS_F).unwrap();
        gauge = gauge.max((s(&p.matrix, Cut::half(l)) - s(&gauged.matrix, Cut::half(l))).abs());
    }
    let chain = build_chain(&ChainSpec::new(model.clone(), 24, Boundary::Open).unwrap()).unwrap();
    let sys = eig_biorthogonal(&chain).unwrap();
    let p = occupied_projector(&sys, FermiRule::HalfFilling, DEFAULT_EPS_F).unwrap();
    idem = idem.max(p.idempotence_error());
    biorth = biorth.max(sys.biorthonormality_error());

    let mut vieta = 0.0_f64;
    for _ in 0..50 {
        let e = C64::new(rng.random_range(-3.0..3.0), rng.random_range(-1.0..1.0));
        let roots = char_poly_roots(&model, e).unwrap().roots;
        vieta = vieta.max((roots[0] * roots[1] - t_r / t_l).norm());
    }
    let mut off_diag = 0.0_f64;
    for l in 20..=60 {
        for pt in scale_gbz(t_l, t_r, DELTA, l).unwrap().points {
            match projector_symbol(&model, pt.momentum) {
                Ok(pk) => off_diag = off_diag.max((C64::new(4.0, 0.0) * pk[(0, 1)] * pk[(1, 0)] - 1.0).norm()),
                Err(_) => failures.push(format!("EP on grid at L={l}")),
            }
        }
    }
    let eff = effective_scan((20..=55).collect(), ImKRule::Scaling);
    let (odd_depth, odd_l) = dip_depth(&eff.records(), Parity::Odd).unwrap();
    let (even_depth, _) = dip_depth(&eff.records(), Parity::Even).unwrap();
    let frozen = effective_scan((20..=55).collect(), ImKRule::Frozen(41));
    // |Im K| = α/42 = 0.123 on every size.
    let frozen_depth =
        [Parity::Odd, Parity::Even].into_iter().map(|p| dip_depth(&frozen.records(), p).unwrap().0).fold(0.0, f64::max);

    let checks = [
        ("idempotence", idem, 1e-7),
        ("vieta", vieta, 1e-10),
        ("biorthonormality", biorth, 1e-8),
        ("gauge invariance", gauge, 1e-8),
        ("S(no cut)", no_cut, 1e-8),
        ("2P_K off-diagonal product", off_diag, 1e-9),
    ];
    for (name, value, tol) in checks {
        if value >= tol {
            failures.push(format!("{name} {value:.2e} ≥ {tol:.0e}"));
        }
    }
    if !(odd_depth > 0.5 && even_depth < 0.5) {
        failures.push(format!("parity dichotomy odd {odd_depth:.3} even {even_depth:.3}"));
    }
    if frozen_depth >= 0.5 {
        failures.push(format!("frozen GBZ dip depth {frozen_depth:.3}"));
    }
    let summary = format!(
        "idem {idem:.1e}, vieta {vieta:.1e}, biorth {biorth:.1e}, gauge {gauge:.1e}, S(no cut) {no_cut:.1e}, \
         2P_K {off_diag:.1e}, dip depth odd {odd_depth:.3} at L={odd_l} / even {even_depth:.3}, frozen {frozen_depth:.3}"
    );
    if failures.is_empty() {
        outcome(true, summary)
    } else {
        outcome(false, format!("{summary}; failed: {failures:?}"))
    }
}

fn measurement_identity() -> Outcome {
    let (t_l, t_r) = hoppings();
    let model = nh_ssh(t_l, t_r).unwrap();
    let bases = [
        ("coupled", build_coupled(&CoupledSpec::new(model.clone(), DELTA, 10).unwrap()).unwrap()),
        ("single chain", build_chain(&ChainSpec::new(model, 10, Boundary::Open).unwrap()).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_rel = 0.0_f64;
    let mut worst_lambda = 0.0_f64;
    for (_, base) in &bases {
        let doubled = build_doubled(base, 1e-6).unwrap();
        let n = base.nrows();
        for _ in 0..20 {
            let a = Mat::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let check = measurement_identity_check(&doubled, &a).unwrap();
            worst_rel = worst_rel.max(check.abs_error / a.norm_l2());
            for e in &check.entries {
                worst_lambda = worst_lambda.max((e.lambda - e.biorthogonal_overlap).norm());
            }
        }
    }
    outcome(
        worst_rel < 1e-7 && worst_lambda < 1e-8,
        format!("max |lhs − rhs|/‖A‖ = {worst_rel:.2e} (< 1e-7), max |⟨Λ⟩ − ⟨ψL|ψR⟩| = {worst_lambda:.2e} (< 1e-8)"),
    )
}

fn single_cell() -> Outcome {
    let (t_l, t_r) = hoppings();
    let odd: Vec<usize> = (31..=49).step_by(2).collect();
    let analytic: Vec<(usize, f64)> = odd
        .iter()
        .map(|&l| (l, single_cell_approx(t_l, t_r, DELTA, l, Offsets::default()).unwrap().p_tilde[1].re))
        .collect();
    let scan = dense_scan(DELTA, odd.clone(), CutRule::SingleCell);
    let dense: Vec<(usize, f64)> = scan
        .points
        .iter()
        .map(|p| {
            let nontrivial =
                p.p_spectrum.iter().map(|q| q.norm().min((C64::new(1.0, 0.0) - q).norm())).fold(0.0, f64::max);
            (p.record.length, nontrivial)
        })
        .collect();
    let (ka, kd) = (jump_kink(&analytic), jump_kink(&dense));
    let sc = single_cell_approx(t_l, t_r, DELTA, 41, Offsets::default()).unwrap();
    let pass = (sc.a - 0.3905).abs() <= 0.001 && (sc.b - 0.0456).abs() <= 0.001 && ka.is_some() && ka == kd;
    outcome(
        pass,
        format!(
            "a = {:.4} (0.3905 ± 0.001), b = {:.4} (0.0456 ± 0.001), kink analytic L={ka:?} dense L={kd:?}",
            sc.a, sc.b
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("critical-size prediction", critical_size),
        ("delta to L_c curve", delta_curve),
        ("entanglement dip depth", dip_depth_criterion),
        ("dip scaling law", scaling_law),
        ("GBZ-spectrum agreement", gbz_agreement),
        ("baseline log scaling", baselines),
        ("property suite", property_suite),
        ("measurement identity", measurement_identity),
        ("single-cell analytics", single_cell),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} primary criteria pass", criteria.len() - failed, criteria.len());
}
