mod common;

use alphadiv::gibbs::*;
use alphadiv::Error;
use proptest::prelude::*;
use std::time::Instant;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn nig(beta: f64) -> GGParams {
    GGParams::from_beta(beta, 0.5).unwrap()
}

#[test]
fn quadrature_v_matches_oracle() {
    for (n, k, beta) in [(1, 1, 2.0), (5, 2, 0.5), (20, 6, 2.0), (30, 10, 10.0), (100, 15, 2.0), (200, 60, 1000.0)] {
        let p = nig(beta);
        let got = ln_v_quadrature(n, k, &p).unwrap();
        let want = common::ln_v(n, k, p.a(), p.tau(), 0.5);
        assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "({n}, {k}, {beta}): {got} vs {want}");
    }
    let p = GGParams::new(0.7, 2.0, 0.3).unwrap();
    let got = ln_v_quadrature(12, 4, &p).unwrap();
    let want = common::ln_v(12, 4, 0.7, 2.0, 0.3);
    assert!((got - want).abs() < 1e-10 * want.abs());
}

#[test]
fn exact_route_agrees_with_quadrature() {
    for beta in [0.5, 2.0, 10.0] {
        let p = nig(beta);
        for n in [1usize, 2, 5, 13, 20, 35, 50] {
            for k in [1, (n + 1) / 2, n] {
                let e = weights_gg_exact(n, k, &p).unwrap();
                let q = weights_gg_quadrature(n, k, &p).unwrap();
                assert!(rel(e.g0, q.g0) < 1e-6 && rel(e.g1, q.g1) < 1e-6, "({n}, {k}, {beta}) {e:?} {q:?}");
            }
        }
    }
    let p = GGParams::nig(1.0, 1.0).unwrap();
    let e = weights_gg_exact(20, 6, &p).unwrap();
    let q = weights_gg_quadrature(20, 6, &p).unwrap();
    assert!(rel(e.g0, q.g0) < 1e-6);
}

#[test]
fn small_beta_limit() {
    let p = nig(1e-6);
    let q = weights_gg_quadrature(1, 1, &p).unwrap();
    let e = weights_gg_exact(1, 1, &p).unwrap();
    assert!((q.g0 - 0.5).abs() < 1e-5 && (e.g0 - q.g0).abs() < 1e-8);
}

#[test]
fn quadrature_constraint_examples() {
    let p = GGParams::nig(1.0, 1.0).unwrap();
    for (n, k) in [(5, 2), (30, 10), (100, 15)] {
        let w = weights_gg_quadrature(n, k, &p).unwrap();
        assert!(w.constraint_residual(n, k, 0.5).abs() < 1e-8);
    }
}

#[test]
fn w_tends_to_one() {
    let p = GGParams::nig(1.0, 1.0).unwrap();
    let mut last = 0.0;
    for n in [100usize, 1000, 10_000] {
        let k = (2.0 * (n as f64).sqrt()).ceil() as usize;
        let (w, one_minus) = decomposition_w(n, k, &p).unwrap();
        assert!(w > 0.0 && w < 1.0);
        assert!(w > last);
        let g = weights_gg_quadrature(n, k, &p).unwrap();
        assert!(rel(1.0 - g.g0, (1.0 - 0.5 * k as f64 / n as f64) * w) < 1e-8);
        last = w;
        eprintln!("n = {n}: 1 - w = {one_minus:e}");
    }
    assert!(last > 0.99);
}

#[test]
fn asymptotic_weights() {
    let p = nig(2.0);
    let (n, k) = (10_000, 200);
    let a = weights_gg_asymptotic(n, k, &p).unwrap();
    let q = weights_gg_quadrature(n, k, &p).unwrap();
    let s_n = k as f64 / (n as f64).sqrt();
    assert!((a.g0 - q.g0).abs() <= 0.05 * (2.0 / s_n) / n as f64);
    let mut prev = f64::INFINITY;
    let mut prev_g1 = f64::INFINITY;
    for n in [100usize, 1000, 10_000] {
        let k = (2.0 * (n as f64).sqrt()).ceil() as usize;
        let a = weights_gg_asymptotic(n, k, &p).unwrap();
        let q = weights_gg_quadrature(n, k, &p).unwrap();
        let dev = n as f64 * (a.g0 - q.g0).abs();
        assert!(dev < prev);
        prev = dev;
        let g1_dev = (n as f64 * q.g1 - 1.0).abs();
        assert!(g1_dev < prev_g1);
        prev_g1 = g1_dev;
    }
}

#[test]
fn eppf_sums_over_shapes_for_n3() {
    let p = GGParams::nig(1.0, 1.0).unwrap();
    let total = eppf(&[3], &p).unwrap() + 3.0 * eppf(&[2, 1], &p).unwrap() + eppf(&[1, 1, 1], &p).unwrap();
    assert!((total - 1.0).abs() < 1e-8);
}

#[test]
fn v_recursion_with_general_alpha() {
    let p = GGParams::new(1.3, 0.8, 0.35).unwrap();
    for (n, k) in [(3, 2), (10, 4), (25, 9)] {
        let v = ln_v_quadrature(n, k, &p).unwrap().exp();
        let rhs = (n as f64 - 0.35 * k as f64) * ln_v_quadrature(n + 1, k, &p).unwrap().exp()
            + ln_v_quadrature(n + 1, k + 1, &p).unwrap().exp();
        assert!(rel(v, rhs) < 1e-9);
    }
}

#[test]
fn singleton_pmf_normalizes_and_matches_moments() {
    let p = GGParams::nig(1.0, 1.0).unwrap();
    for n in [2usize, 6, 12] {
        let pmf: Vec<f64> = (0..=n).map(|m| m1_pmf(n, m, &p).unwrap()).collect();
        let total: f64 = pmf.iter().sum();
        assert!((total - 1.0).abs() < 1e-6, "n = {n}: {total}");
        assert!(pmf.iter().all(|&x| x >= -1e-14));
        for r in 1..=3.min(n) {
            let direct: f64 = pmf
                .iter()
                .enumerate()
                .map(|(m, &q)| (0..r).map(|i| m as f64 - i as f64).product::<f64>() * q)
                .sum();
            let fm = m1_factorial_moment(n, r, &p).unwrap();
            assert!(rel(fm, direct) < 1e-8, "n = {n}, r = {r}: {fm} vs {direct}");
        }
    }
}

#[test]
fn singleton_pmf_general_alpha() {
    let p = GGParams::new(1.0, 1.0, 0.3).unwrap();
    let total: f64 = (0..=8).map(|m| m1_pmf(8, m, &p).unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-6);
}

#[test]
fn exact_route_refusal_is_an_error() {
    let p = nig(10.0);
    let cfg = ExactConfig { multiprecision: false, ..ExactConfig::default() };
    match weights_gg_exact_with(50, 20, &p, &cfg) {
        Err(Error::PrecisionLoss(msg)) => assert!(msg.contains("quadrature")),
        other => panic!("expected refusal, got {other:?}"),
    }
}

#[test]
fn large_n_exact_route_is_fast_enough() {
    let t = Instant::now();
    let p = nig(10.0);
    let w = weights_gg_exact(200, 40, &p).unwrap();
    let q = weights_gg_quadrature(200, 40, &p).unwrap();
    assert!(rel(w.g0, q.g0) < 1e-8);
    eprintln!("n = 200 exact route: {:?}, condition {:.1}", t.elapsed(), w.condition_estimate);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pd_constraint(theta in 0.0f64..20.0, alpha in 0.0f64..0.99, n in 1usize..200, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let w = weights_pd(n, k, &PDParams::new(theta, alpha).unwrap()).unwrap();
        prop_assert!(w.constraint_residual(n, k, alpha).abs() < 1e-12);
    }

    #[test]
    fn exact_constraint(beta in 0.05f64..12.0, n in 1usize..50, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let w = weights_gg_exact(n, k, &nig(beta)).unwrap();
        prop_assert!(w.constraint_residual(n, k, 0.5).abs() < 1e-9);
        prop_assert!(w.g0 > 0.0 && w.g0 < 1.0 && w.g1 > 0.0 && w.g1 < 1.0);
    }

    #[test]
    fn eppf_is_symmetric(mut sizes in prop::collection::vec(1usize..6, 1..6)) {
        let p = nig(2.0);
        let a = ln_eppf(&sizes, &p).unwrap();
        sizes.reverse();
        prop_assert_eq!(a, ln_eppf(&sizes, &p).unwrap());
    }
}
