use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use wigner_direct::error::Error;
use wigner_direct::oracle::{bessel_k0, epsilon_extrapolated_propagator, free_kernel_quadrature};
use wigner_direct::phase_space::PhaseSpaceGrid;
use wigner_direct::propagators::*;

fn params(d: usize) -> ModelParams {
    ModelParams::new(d, 1.0, 1.0, 0.1, 200.0).unwrap()
}

fn at(t: f64, x: f64) -> SpacetimePoint {
    SpacetimePoint::at(t, x)
}

// K₁(r) = ∫₀^∞ e^{−r cosh u} cosh u du, trapezoid on a long interval.
fn bessel_k1(r: f64) -> f64 {
    let h = 1e-3;
    let n = (20.0 / h) as usize;
    let mut s = 0.5 * (-r).exp();
    for i in 1..n {
        let u = i as f64 * h;
        s += (-r * u.cosh()).exp() * u.cosh();
    }
    s * h
}

#[test]
fn three_dimensional_feynman_matches_extrapolation() {
    let p = params(3);
    let a = SpacetimePoint::new(1.3, vec![0.4, -1.0, 0.7]);
    let b = SpacetimePoint::new(0.2, vec![0.0, 0.5, -0.3]);
    let eps = [0.01, 0.005, 0.0025, 0.00125, 0.000625];
    let num = epsilon_extrapolated_propagator(&a, &b, &p, &eps).unwrap();
    let closed = sys_feynman(&a, &b, &p).unwrap();
    assert!(!num.flagged);
    assert!((num.complex() - closed).norm() <= 1e-6 * closed.norm());
    let back = epsilon_extrapolated_propagator(&b, &a, &p, &eps).unwrap();
    assert!(back.complex().norm() <= 1e-6 * closed.norm());
}

#[test]
fn both_orderings_match_momentum_quadrature() {
    let p = params(1);
    for (dt, dx) in [(0.5, 0.3), (-0.5, 0.3), (2.0, -1.5), (-1.2, 2.2)] {
        let a = at(dt, dx);
        let b = at(0.0, 0.0);
        let ordered = sys_feynman(&a, &b, &p).unwrap() + sys_dyson(&a, &b, &p).unwrap();
        let q = free_kernel_quadrature(dt, &[dx], p.m_s).unwrap();
        assert!((ordered - q).norm() < 1e-9 * q.norm(), "{dt} {dx}: {ordered} vs {q}");
    }
}

#[test]
fn kernel_integrated_form_is_a_nascent_delta() {
    let grid = PhaseSpaceGrid::centered(1, 128, 0.2).unwrap();
    let f: Vec<Complex64> = grid
        .x_nodes()
        .iter()
        .map(|&x| Complex64::new((-x * x).exp(), 0.0))
        .collect();
    let same = propagate_free(&f, &grid, 1.0, 0.0).unwrap();
    assert_eq!(same, f);
    let near = propagate_free(&f, &grid, 1.0, 1e-9).unwrap();
    let gap = near.iter().zip(&f).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    assert!(gap < 1e-8, "{gap}");
}

#[test]
fn kernel_integrated_form_spreads_a_gaussian() {
    // e^{−x²/(4s²)} evolves to √(s/b) e^{−x²/(4 s b)} with b = s + i t/(2 m s).
    let grid = PhaseSpaceGrid::centered(1, 256, 0.15).unwrap();
    let s = 1.0;
    let (m, t) = (2.0, 1.5);
    let f: Vec<Complex64> = grid
        .x_nodes()
        .iter()
        .map(|&x| Complex64::new((-x * x / (4.0 * s * s)).exp(), 0.0))
        .collect();
    let out = propagate_free(&f, &grid, m, t).unwrap();
    let b = Complex64::new(s, t / (2.0 * m * s));
    for (x, v) in grid.x_nodes().iter().zip(&out) {
        let want = (s / b).sqrt() * (-(x * x) / (4.0 * s * b)).exp();
        assert!((v - want).norm() < 1e-10, "{x}");
    }
}

#[test]
fn malformed_points_are_rejected() {
    let p = params(1);
    let a = SpacetimePoint::new(1.0, vec![0.0, 1.0]);
    assert!(sys_feynman(&a, &at(0.0, 0.0), &p).is_err());
    assert!(env_wightman(&a, &at(0.0, 0.0), &p).is_err());
    assert!(sys_dyson(&at(f64::NAN, 0.0), &at(0.0, 0.0), &p).is_err());
    assert!(matches!(sys_dyson(&at(1.0, 0.0), &at(1.0, 2.0), &p), Err(Error::EqualTime)));
}

#[test]
fn equal_time_wightman_in_three_dimensions() {
    // m K₁(m r) / (4π² r)
    let p = ModelParams::new(3, 1.0, 1.0, 0.1, 400.0).unwrap();
    for r in [0.5, 1.0, 2.0] {
        let w = env_wightman(&SpacetimePoint::new(0.0, vec![0.0; 3]), &SpacetimePoint::new(0.0, vec![r, 0.0, 0.0]), &p)
            .unwrap();
        let want = bessel_k1(r) / (4.0 * PI * PI * r);
        assert!((w.re - want).abs() < 1e-5 * want, "{r}: {} vs {want}", w.re);
        assert!(w.im.abs() < 1e-12);
    }
}

#[test]
fn larger_cutoff_approaches_the_continuum() {
    let want = bessel_k0(1.0).value.re / (2.0 * PI);
    let gap = |cutoff: f64| {
        let p = ModelParams::new(1, 1.0, 1.0, 0.0, cutoff).unwrap();
        (env_wightman(&at(0.0, 0.0), &at(0.0, 1.0), &p).unwrap().re - want).abs()
    };
    assert!(gap(200.0) < gap(50.0));
}

#[test]
fn commutator_does_not_depend_on_temperature() {
    let cold = params(1);
    let hot = params(1).with_temperature(2.0).unwrap();
    let (a, b) = (at(0.7, 0.3), at(0.0, -0.4));
    let comm = |p: &ModelParams| env_wightman(&a, &b, p).unwrap() - env_wightman(&b, &a, p).unwrap();
    assert!((comm(&cold) - comm(&hot)).norm() < 1e-10);
    let anti = |p: &ModelParams| (env_wightman(&a, &b, p).unwrap() + env_wightman(&b, &a, p).unwrap()).re;
    assert!(anti(&hot) > anti(&cold));
}

#[test]
fn zero_temperature_limit_is_continuous() {
    let cold = params(1);
    let tiny = params(1).with_temperature(1e-3).unwrap();
    let (a, b) = (at(0.4, 0.0), at(0.0, 1.0));
    let gap = (env_wightman(&a, &b, &cold).unwrap() - env_wightman(&a, &b, &tiny).unwrap()).norm();
    assert!(gap < 1e-12, "{gap}");
}

#[test]
fn mode_weights_are_non_negative() {
    let p = params(1).with_temperature(0.5).unwrap();
    for i in 0..400 {
        let k = i as f64 * 0.6;
        let (plus, minus) = p.mode_weights(k);
        assert!(plus >= minus && minus >= 0.0, "{k}");
    }
    let (_, minus) = params(1).mode_weights(3.0);
    assert_eq!(minus, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dyson_is_the_conjugate_reverse_of_feynman(
        ta in -3.0f64..3.0, tb in -3.0f64..3.0, xa in -4.0f64..4.0, xb in -4.0f64..4.0,
    ) {
        prop_assume!((ta - tb).abs() > 1e-3);
        let p = params(1);
        let (a, b) = (at(ta, xa), at(tb, xb));
        let d = sys_dyson(&a, &b, &p).unwrap();
        let f = sys_feynman(&b, &a, &p).unwrap();
        prop_assert!((d - f.conj()).norm() <= 1e-12);
        let later = if ta > tb { sys_dyson(&a, &b, &p) } else { sys_feynman(&a, &b, &p) }.unwrap();
        prop_assert_eq!(later, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn environment_orderings(
        ta in -1.0f64..1.0, tb in -1.0f64..1.0, xa in -2.0f64..2.0, xb in -2.0f64..2.0,
    ) {
        let p = ModelParams::new(1, 1.0, 1.0, 0.1, 20.0).unwrap();
        let (a, b) = (at(ta, xa), at(tb, xb));
        let ab = env_wightman(&a, &b, &p).unwrap();
        let ba = env_wightman(&b, &a, &p).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-12);
        let f = env_feynman(&a, &b, &p).unwrap();
        prop_assert!((f - env_feynman(&b, &a, &p).unwrap()).norm() <= 1e-12);
        let d = env_dyson(&a, &b, &p).unwrap();
        prop_assert!((f + d - ab - ba).norm() <= 1e-12);
    }

    #[test]
    fn equal_time_wightman_is_real(ta in -1.0f64..1.0, xa in -2.0f64..2.0, xb in -2.0f64..2.0) {
        let p = ModelParams::new(1, 1.0, 1.0, 0.1, 20.0).unwrap();
        let w = env_wightman(&at(ta, xa), &at(ta, xb), &p).unwrap();
        prop_assert!(w.im.abs() <= 1e-12);
    }
}
