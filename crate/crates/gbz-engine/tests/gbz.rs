use std::f64::consts::PI;

use proptest::prelude::*;
use siec_gbz::{
    bloch_spectrum_on, boundary_match_radius, char_poly_roots, critical_params, delta_k, gbz_from_spectrum,
    matching_rhs, normalized_residual, scale_gbz, standard_gbz, Branch, GbzError, Regime, RootRule, C64,
};
use siec_lattice::{
    build_chain, build_coupled, nh_ssh, params, predefined, Boundary, ChainSpec, CoupledSpec, ModelName,
};
use siec_spectral::eigenvalues;

fn s1() -> (f64, f64, f64) {
    (1.2 * 0.3_f64.exp(), 1.2 * (-0.3_f64).exp(), 1.6e-3)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn hermitian_band_edge_is_a_double_root() {
    let m = predefined(ModelName::HermitianSsh, &params(&[("t1", 1.0), ("t2", 1.0)])).unwrap();
    let set = char_poly_roots(&m, c(2.0, 0.0)).unwrap();
    assert_eq!(set.roots.len(), 2);
    for z in &set.roots {
        assert!((z - 1.0).norm() < 1e-6, "{z}");
    }
}

#[test]
fn ssh_roots_obey_vieta_at_zero_energy() {
    let set = char_poly_roots(&nh_ssh(1.62, 0.89).unwrap(), c(0.0, 0.0)).unwrap();
    assert_eq!(set.roots.len(), 2);
    assert!((set.roots[0] * set.roots[1] - 0.89 / 1.62).norm() < 1e-10);
    assert!(set.roots[0].norm() <= set.roots[1].norm());
}

#[test]
fn fig4b_polynomial_is_cubic() {
    let m = predefined(ModelName::Fig4b, &params(&[("t_l", 1.3), ("t_r", 0.7)])).unwrap();
    for e in [c(0.0, 0.0), c(0.4, -0.2), c(-1.1, 0.9)] {
        let set = char_poly_roots(&m, e).unwrap();
        assert_eq!(set.roots.len(), 3);
        assert!(normalized_residual(&m, &set) < 1e-9);
    }
}

#[test]
fn phi_matches_ssh_eigenvector_ratio() {
    let (t_l, t_r) = (1.62, 0.89);
    let e = c(0.3, 0.2);
    let set = char_poly_roots(&nh_ssh(t_l, t_r).unwrap(), e).unwrap();
    for (z, phi) in set.roots.iter().zip(set.phi.unwrap()) {
        assert!((phi - (t_r + z) / e).norm() < 1e-10);
    }
}

#[test]
fn degenerate_model_is_a_domain_error() {
    // A vanishing σ₊ channel leaves det(H(z) − E) = E², identically zero at E = 0.
    let m = siec_lattice::BlochModel::two_band("zero", &[(1, c(0.0, 0.0))], &[(1, c(1.0, 0.0))]).unwrap();
    assert!(matches!(char_poly_roots(&m, c(0.0, 0.0)), Err(GbzError::Domain(_))));
    assert!(char_poly_roots(&m, c(0.5, 0.0)).unwrap().roots.is_empty());
}

#[test]
fn standard_gbz_radii() {
    let bloch = standard_gbz(&nh_ssh(1.1, 1.1).unwrap(), 10).unwrap();
    assert!(bloch.points.iter().all(|p| (p.z.norm() - 1.0).abs() < 1e-12));
    let (t_l, t_r, _) = s1();
    let g = standard_gbz(&nh_ssh(t_l, t_r).unwrap(), 12).unwrap();
    assert_eq!(g.regime, Regime::Standard);
    assert_eq!(g.points.len(), 12);
    assert!(g.points.iter().all(|p| (p.z.norm() - (-0.3_f64).exp()).abs() < 1e-12));
    // Skin depth −log|z| = ½ log(t_L/t_R).
    assert!((-g.radius().ln() - 0.5 * (t_l / t_r).ln()).abs() < 1e-12);
    let herm = predefined(ModelName::HermitianSsh, &params(&[("t1", 1.0), ("t2", 0.6)])).unwrap();
    assert!((standard_gbz(&herm, 5).unwrap().radius() - 1.0).abs() < 1e-12);
    let fig4b = predefined(ModelName::Fig4b, &params(&[("t_l", 1.3), ("t_r", 0.7)])).unwrap();
    assert!(matches!(standard_gbz(&fig4b, 5), Err(GbzError::Unsupported(_))));
}

#[test]
fn k_grid_parity() {
    for l in 2..12 {
        let g = standard_gbz(&nh_ssh(1.3, 0.7).unwrap(), l).unwrap();
        let has_pi = g.points.iter().any(|p| (p.k - PI).abs() < 1e-12);
        assert_eq!(has_pi, l % 2 == 1);
        assert!(g.points.iter().all(|p| p.k > 0.0 && p.k < 2.0 * PI));
    }
}

#[test]
fn critical_parameters_at_fig_s1() {
    let (t_l, t_r, d) = s1();
    let p = critical_params(t_l, t_r, d).unwrap();
    assert!((p.l_c - 42.79).abs() < 0.05, "L_c = {}", p.l_c);
    assert!((p.alpha - 5.153).abs() < 1e-3, "alpha = {}", p.alpha);
    assert!((p.l_prime - 16.2).abs() < 0.05, "L' = {}", p.l_prime);
    assert!((p.k_c - c(PI, p.alpha / (p.l_c + 1.0))).norm() < 1e-15);
    let g = scale_gbz(t_l, t_r, d, 43).unwrap();
    assert_eq!(g.branch, Some(Branch::Strong));
    assert!((g.radius() - t_r).abs() < 0.01 * t_r);
    assert!(g.flags.is_empty());
    assert_eq!(scale_gbz(t_l, t_r, d, 16).unwrap().branch, Some(Branch::Weak));
}

#[test]
fn radius_is_continuous_at_crossover() {
    let (t_l, t_r, d) = s1();
    let p = critical_params(t_l, t_r, d).unwrap();
    let weak = (t_r / t_l).sqrt();
    let strong = (-p.alpha / (p.l_prime + 1.0)).exp();
    assert!((weak - strong).abs() < 1e-9);
}

#[test]
fn scale_gbz_domain_errors_and_flags() {
    assert!(matches!(scale_gbz(1.5, 0.5, 0.0, 10), Err(GbzError::Domain(_))));
    assert!(matches!(scale_gbz(1.5, 0.5, 50.0, 10), Err(GbzError::Domain(_))));
    let g = scale_gbz(0.8, 0.5, 1e-3, 10).unwrap();
    assert_eq!(g.flags.len(), 1);
}

#[test]
fn delta_k_examples() {
    let (t_l, t_r, d) = s1();
    let g = scale_gbz(t_l, t_r, d, 43).unwrap();
    let p = g.critical.unwrap();
    assert!(delta_k(PI, p.l_c, &g).unwrap().norm() < 1e-15);
    let dk = delta_k(PI, 41.0, &g).unwrap();
    assert_eq!(dk.re, 0.0);
    let approx = p.alpha * (p.l_c - 41.0) / (42.0 * (p.l_c + 1.0));
    assert!((dk.im - approx).abs() < 1e-12);
    let off = delta_k(PI - PI / 20.0, 20.0, &g).unwrap();
    assert!(off.re.abs() > off.im.abs());
    let std = standard_gbz(&nh_ssh(t_l, t_r).unwrap(), 10).unwrap();
    assert!(delta_k(PI, 10.0, &std).is_err());
}

#[test]
fn numeric_gbz_of_uncoupled_chain() {
    let (t_l, t_r, _) = s1();
    let model = nh_ssh(t_l, t_r).unwrap();
    let h = build_chain(&ChainSpec::new(model.clone(), 40, Boundary::Open).unwrap()).unwrap();
    let zs = gbz_from_spectrum(&model, &eigenvalues(&h).unwrap(), RootRule::default());
    let target = (t_r / t_l).sqrt();
    for z in zs {
        let z = z.expect("root solve");
        assert!((z.norm() - target).abs() < 0.02 * target, "|z| = {}", z.norm());
    }
}

#[test]
fn numeric_gbz_of_coupled_chain_above_crossover() {
    let (t_l, t_r, d) = s1();
    let model = nh_ssh(t_l, t_r).unwrap();
    let l = 60;
    let m = build_coupled(&CoupledSpec::new(model.clone(), d, l).unwrap()).unwrap();
    let zs = gbz_from_spectrum(&model, &eigenvalues(&m).unwrap(), RootRule::default());
    let target = scale_gbz(t_l, t_r, d, l).unwrap().radius();
    let mut radii: Vec<f64> = zs.iter().map(|z| z.unwrap().norm()).collect();
    radii.sort_by(f64::total_cmp);
    let median = radii[radii.len() / 2];
    assert!((median - target).abs() < 0.02 * target, "median |z| = {median}, target {target}");
}

#[test]
fn numeric_gbz_of_hermitian_chain_is_unit_circle() {
    let m = predefined(ModelName::HermitianSsh, &params(&[("t1", 1.0), ("t2", 0.6)])).unwrap();
    let h = build_chain(&ChainSpec::new(m.clone(), 30, Boundary::Open).unwrap()).unwrap();
    let energies: Vec<C64> = eigenvalues(&h).unwrap().into_iter().filter(|e| e.norm() > 1e-3).collect();
    for z in gbz_from_spectrum(&m, &energies, RootRule::default()) {
        assert!((z.unwrap().norm() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn invalid_energy_is_marked_not_fatal() {
    let m = nh_ssh(1.3, 0.7).unwrap();
    let out = gbz_from_spectrum(&m, &[c(0.1, 0.0), c(f64::NAN, 0.0)], RootRule::default());
    assert!(out[0].is_some());
    assert!(out[1].is_none());
}

#[test]
fn bloch_spectrum_on_points_is_band_pairs() {
    let (t_l, t_r, d) = s1();
    let model = nh_ssh(t_l, t_r).unwrap();
    let g = scale_gbz(t_l, t_r, d, 30).unwrap();
    let zs: Vec<C64> = g.points.iter().map(|p| p.z).collect();
    let e = bloch_spectrum_on(&model, &zs).unwrap();
    assert_eq!(e.len(), 60);
    for pair in e.chunks(2) {
        assert!((pair[0] + pair[1]).norm() < 1e-10);
    }
}

#[test]
fn boundary_matching_strong_regime() {
    let (t_l, t_r, d) = s1();
    let alpha0 = t_r * (t_r - t_l) / (t_l * (t_r - 1.0));
    let mut deviations = Vec::new();
    for l in [60usize, 100, 200] {
        let closed = (d * alpha0).abs().powf(1.0 / (l as f64 + 1.0));
        let probe = siec_gbz::dispersion_energy(t_l, t_r, C64::from_polar(closed, 0.95 * PI));
        let bm = boundary_match_radius(t_l, t_r, d, l, probe).unwrap();
        assert!(bm.converged);
        assert!(bm.residual < 1e-10, "residual {}", bm.residual);
        assert!((bm.z1 * bm.z2 - t_r / t_l).norm() < 1e-12);
        let w = matching_rhs(t_l, t_r, d, l, bm.z1).unwrap();
        assert!((bm.z1.powf(l as f64 + 1.0) - w).norm() / w.norm() < 1e-10);
        deviations.push((bm.z1.norm() - closed).abs() / closed);
    }
    // The closed form drops O(1/(L+1)) corrections: the gap shrinks with L and is
    // inside 1% deep in the strong regime.
    assert!(deviations[0] > deviations[1] && deviations[1] > deviations[2], "{deviations:?}");
    assert!(deviations[2] < 0.01, "{deviations:?}");
}

#[test]
fn boundary_matching_weak_regime() {
    let (t_l, t_r) = (1.62, 0.89);
    let l = 20;
    let d = 1e-12;
    let rho: f64 = t_r / t_l;
    assert!(d < rho.powi(l as i32) * 1e-3);
    let bm = boundary_match_radius(t_l, t_r, d, l, c(0.9, 0.0)).unwrap();
    assert!(bm.converged);
    assert!(bm.residual < 1e-10);
    assert!((bm.z1.norm() - rho.sqrt()).abs() < 0.05 * rho.sqrt(), "|z1| = {}", bm.z1.norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vieta_holds_everywhere(t_l in 0.3f64..3.0, t_r in 0.3f64..3.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let set = char_poly_roots(&nh_ssh(t_l, t_r).unwrap(), c(re, im)).unwrap();
        prop_assert_eq!(set.roots.len(), 2);
        prop_assert!((set.roots[0] * set.roots[1] - t_r / t_l).norm() < 1e-10);
    }

    #[test]
    fn roots_solve_the_determinant(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let m = predefined(ModelName::Fig4c, &params(&[("t_l", 1.3)])).unwrap();
        let set = char_poly_roots(&m, c(re, im)).unwrap();
        prop_assert!(normalized_residual(&m, &set) < 1e-9);
        for w in set.roots.windows(2) {
            prop_assert!(w[0].norm() <= w[1].norm());
        }
    }
}
