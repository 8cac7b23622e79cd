use std::f64::consts::PI;

use faer::Mat;
use proptest::prelude::*;
use siec_lattice::{
    build_chain, build_coupled, inversion_operator, nh_ssh, params, predefined, Boundary, ChainSpec, CoupledSpec,
    ModelName, C64,
};

fn sorted(mut e: Vec<C64>) -> Vec<C64> {
    e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    e
}

/// Max over `a` of the distance to the nearest element of `b` and vice versa.
fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    let one = |x: &[C64], y: &[C64]| {
        x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

fn eig(m: &Mat<C64>) -> Vec<C64> {
    sorted(m.eigenvalues().unwrap())
}

fn catalog() -> Vec<siec_lattice::BlochModel> {
    let t = |n: &str, p: &[(&str, f64)]| predefined(n.parse().unwrap(), &params(p)).unwrap();
    vec![
        t("nh_ssh", &[("t_l", 1.62), ("t_r", 0.89)]),
        t("fig4b", &[("t_l", 1.3), ("t_r", 0.7)]),
        t("fig4c", &[("t_l", 1.3)]),
        t("hermitian_ssh", &[("t1", 1.0), ("t2", 0.6)]),
        t("nhse_ssh_s11", &[("t_l", 1.0), ("t_r", 0.5), ("t2", 1.0)]),
        t("ep_model_s11", &[]),
        t("nhse_B2", &[("t_l", 1.62), ("t_r", 0.89)]),
        t("nhse_B3", &[("t_l", 1.62), ("t_r", 0.89)]),
    ]
}

#[test]
fn periodic_chain_matches_bloch_symbol() {
    // Odd length keeps k = π off the grid, where nhse_ssh_s11 has an exceptional point.
    let l = 11;
    for model in catalog() {
        let h = build_chain(&ChainSpec::new(model.clone(), l, Boundary::Periodic).unwrap()).unwrap();
        let mut symbol = Vec::new();
        for m in 0..l {
            let z = C64::from_polar(1.0, 2.0 * PI * m as f64 / l as f64);
            symbol.extend(model.evaluate(z).unwrap().eigenvalues().unwrap());
        }
        let dense = eig(&h);
        // E² is analytic at an exceptional point, E itself is not.
        let sq = |v: &[C64]| v.iter().map(|e| e * e).collect::<Vec<_>>();
        let d2 = multiset_distance(&sq(&dense), &sq(&symbol));
        assert!(d2 < 1e-10, "{}: {d2}", model.label());
        if model.label() != "ep_model_s11" {
            let d = multiset_distance(&dense, &symbol);
            assert!(d < 1e-10, "{}: {d}", model.label());
        }
    }
}

#[test]
fn hermitian_periodic_spectrum_is_real() {
    let m = predefined(ModelName::HermitianSsh, &params(&[("t1", 1.0), ("t2", 1.0)])).unwrap();
    let h = build_chain(&ChainSpec::new(m, 50, Boundary::Periodic).unwrap()).unwrap();
    assert!(eig(&h).iter().all(|e| e.im.abs() < 1e-10));
}

#[test]
fn nh_ssh_open_spectrum_is_real_and_inside_periodic_loop() {
    let model = nh_ssh(1.62, 0.89).unwrap();
    let h = build_chain(&ChainSpec::new(model.clone(), 40, Boundary::Open).unwrap()).unwrap();
    let spectrum = eig(&h);
    assert!(spectrum.iter().all(|e| e.im.abs() < 1e-8));
    // E² on the periodic loop is (t_L + e^{-ik})(t_R + e^{ik}); an open-boundary E² lies
    // inside when the loop winds around it.
    let loop_e2: Vec<C64> = (0..4000)
        .map(|s| {
            let h = model.evaluate(C64::from_polar(1.0, 2.0 * PI * s as f64 / 4000.0)).unwrap();
            h[(0, 1)] * h[(1, 0)]
        })
        .collect();
    for e in spectrum {
        let e2 = e * e;
        let mut winding = 0.0;
        for s in 0..loop_e2.len() {
            let a = loop_e2[s] - e2;
            let b = loop_e2[(s + 1) % loop_e2.len()] - e2;
            winding += (b / a).arg();
        }
        assert!((winding / (2.0 * PI)).round().abs() >= 1.0, "E = {e} outside the loop");
    }
}

#[test]
fn uncoupled_ladder_doubles_the_chain_spectrum() {
    let model = nh_ssh(1.3, 0.8).unwrap();
    let chain = build_chain(&ChainSpec::new(model.clone(), 9, Boundary::Open).unwrap()).unwrap();
    let ladder = build_coupled(&CoupledSpec::new(model, 0.0, 9).unwrap()).unwrap();
    let single = eig(&chain);
    let doubled: Vec<C64> = single.iter().flat_map(|&e| [e, e]).collect();
    assert!(multiset_distance(&eig(&ladder), &doubled) < 1e-10);
    for i in 0..18 {
        for j in 0..18 {
            assert_eq!(ladder[(i, j + 18)], C64::new(0.0, 0.0));
        }
    }
}

#[test]
fn ladder_is_hermitian_when_hoppings_balance() {
    let m = build_coupled(&CoupledSpec::new(nh_ssh(1.1, 1.1).unwrap(), 0.01, 10).unwrap()).unwrap();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            assert!((m[(i, j)] - m[(j, i)].conj()).norm() < 1e-12);
        }
    }
}

#[test]
fn critical_size_ladder_is_nearly_gapless() {
    let model = nh_ssh(1.2 * 0.3_f64.exp(), 1.2 * (-0.3_f64).exp()).unwrap();
    let m = build_coupled(&CoupledSpec::new(model, 1.6e-3, 43).unwrap()).unwrap();
    let gap = eig(&m).iter().map(|e| e.norm()).fold(f64::INFINITY, f64::min);
    assert!(gap < 0.05, "gap {gap}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ladder_has_inversion_symmetry(t_l in 0.2f64..3.0, t_r in 0.2f64..3.0, delta in 0.0f64..0.5, l in 2usize..12) {
        let spec = CoupledSpec::new(nh_ssh(t_l, t_r).unwrap(), delta, l).unwrap();
        let m = build_coupled(&spec).unwrap();
        let p = inversion_operator(spec.layout());
        let pmp = &(&p * &m) * &p;
        prop_assert!((&pmp - &m).norm_max() < 1e-12);
    }

    #[test]
    fn gauge_rescaling_preserves_open_spectrum(r in 0.5f64..1.5, l in 3usize..10) {
        let model = predefined(ModelName::Fig4b, &params(&[("t_l", 1.3), ("t_r", 0.7)])).unwrap();
        let a = build_chain(&ChainSpec::new(model.clone(), l, Boundary::Open).unwrap()).unwrap();
        let b = build_chain(&ChainSpec::new(model.gauge_rescaled(r).unwrap(), l, Boundary::Open).unwrap()).unwrap();
        // diag(r^x) a diag(r^-x) = b exactly.
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let f = r.powi((j / 2) as i32 - (i / 2) as i32);
                prop_assert!((a[(i, j)] * f - b[(i, j)]).norm() < 1e-12);
            }
        }
    }
}
