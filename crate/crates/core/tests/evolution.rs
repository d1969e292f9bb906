use proptest::prelude::*;
use wigner_direct::error::Error;
use wigner_direct::evolution::*;
use wigner_direct::phase_space::*;
use wigner_direct::propagators::ModelParams;

fn grid(n: usize, dx: f64) -> PhaseSpaceGrid {
    PhaseSpaceGrid::centered(1, n, dx).unwrap()
}

fn model(g: f64, cutoff: f64) -> ModelParams {
    ModelParams::new(1, 1.0, 1.0, g, cutoff).unwrap()
}

fn gaussian(g: PhaseSpaceGrid) -> WignerFunction {
    make_initial_wigner(&InitialStateSpec::gaussian(0.0, 0.0, 1.0), &g).unwrap()
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

#[test]
fn time_zero_is_the_identity() {
    let p = model(0.3, 20.0);
    let w0 = gaussian(grid(32, 0.5));
    let r = evolve(&w0, &p, 0.0, &QuadratureSpec::new(&p)).unwrap();
    assert_eq!(r.w_total, w0);
    assert!(r.correction().iter().all(|&c| c == 0.0));
    assert_eq!(evolve_zeroth(&w0, &p, 0.0).unwrap(), w0);
}

#[test]
fn zero_coupling_gives_free_evolution() {
    let p = model(0.0, 20.0);
    let w0 = gaussian(grid(32, 0.5));
    let r = evolve(&w0, &p, 0.7, &QuadratureSpec::new(&p)).unwrap();
    assert_eq!(r.w_total, evolve_zeroth(&w0, &p, 0.7).unwrap());
}

#[test]
fn correction_scales_with_the_square_of_the_coupling() {
    let w0 = make_initial_wigner(&InitialStateSpec::gaussian(0.3, 0.2, 1.0), &grid(32, 0.5)).unwrap();
    let a = evolve(&w0, &model(0.1, 20.0), 0.6, &QuadratureSpec::new(&model(0.1, 20.0))).unwrap();
    let b = evolve(&w0, &model(0.2, 20.0), 0.6, &QuadratureSpec::new(&model(0.2, 20.0))).unwrap();
    let da: Vec<f64> = a.w_total.values.iter().zip(&a.w_zeroth.values).map(|(t, z)| t - z).collect();
    let db: Vec<f64> = b.w_total.values.iter().zip(&b.w_zeroth.values).map(|(t, z)| t - z).collect();
    let gap: f64 = da.iter().zip(&db).map(|(x, y)| (4.0 * x - y).abs()).sum();
    assert!(gap <= 1e-10 * l1(&db), "{gap}");
}

#[test]
fn correction_grows_quadratically_at_short_times() {
    // ω t stays below 0.25 at the cutoff.
    let p = model(0.1, 5.0);
    let quad = QuadratureSpec::new(&p);
    let w0 = gaussian(grid(32, 0.5));
    let sizes: Vec<f64> = [0.01, 0.02, 0.04]
        .iter()
        .map(|&t| l1(&evolve(&w0, &p, t, &quad).unwrap().correction()))
        .collect();
    for pair in sizes.windows(2) {
        let ratio = pair[1] / pair[0];
        assert!((ratio - 4.0).abs() <= 0.05 * 4.0, "{sizes:?}");
    }
}

#[test]
fn loss_terms_are_mirror_images() {
    let p = model(0.1, 20.0);
    let w0 = make_initial_wigner(&InitialStateSpec::cat(0.0, 0.0, 1.0, 4.0, 0.0), &grid(48, 0.4)).unwrap();
    let r = evolve(&w0, &p, 0.8, &QuadratureSpec::new(&p)).unwrap();
    for k in 0..r.w_loss_left.re.len() {
        assert!((r.w_loss_left.re[k] - r.w_loss_right.re[k]).abs() <= 1e-14);
        assert!((r.w_loss_left.im[k] + r.w_loss_right.im[k]).abs() <= 1e-14);
    }
    assert!(r.diagnostics.hermiticity_defect <= 1e-14);
    assert!(r.diagnostics.max_imag_residue <= 1e-8);
    assert!(r.diagnostics.rho_hermiticity_defect.unwrap() <= 1e-8);
}

#[test]
fn correction_conserves_probability() {
    let p = model(0.1, 20.0);
    let w0 = make_initial_wigner(&InitialStateSpec::gaussian(0.0, 0.5, 0.8), &grid(64, 0.3)).unwrap();
    let r = evolve(&w0, &p, 1.0, &QuadratureSpec::new(&p)).unwrap();
    let d = &r.diagnostics;
    assert!(d.quadrature_converged());
    assert!(d.trace_defect_g2.abs() <= 1e-4 * d.gain_l1, "{d:?}");
    assert!(d.trace_defect_g2.abs() <= 10.0 * d.trace_defect_error.max(1e-14));
    // Whatever the grid misses is the gain mass kicked past its momentum window.
    assert!((d.grid_trace_defect_g2 + d.gain_outside_grid - d.trace_defect_g2).abs() <= 1e-8 * d.gain_l1);
    let norm = r.w_total.norm();
    assert!((norm - (1.0 + 0.01 * d.grid_trace_defect_g2)).abs() <= 1e-10);
}

#[test]
fn doubling_the_discretization_stays_within_the_error_estimates() {
    let p = model(0.1, 20.0);
    let quad = QuadratureSpec::new(&p);
    let w0 = gaussian(grid(32, 0.5));
    let a = evolve(&w0, &p, 1.0, &quad).unwrap();
    let b = evolve(&w0, &p, 1.0, &quad.doubled()).unwrap();
    for (x, y) in [(&a.w_gain, &b.w_gain), (&a.w_loss_left, &b.w_loss_left)] {
        for k in 0..x.re.len() {
            assert!((x.re[k] - y.re[k]).abs() <= x.err[k] + y.err[k] + 1e-15);
        }
    }
}

#[test]
fn fixed_rules_agree_with_the_default_path() {
    let p = model(0.1, 10.0);
    let w0 = gaussian(grid(32, 0.5));
    let reference = evolve(&w0, &p, 0.5, &QuadratureSpec::new(&p)).unwrap().correction();
    let scale = l1(&reference);
    for (time_rule, momentum_rule, n_t, n_k) in [
        (TimeRule::GaussLegendre, MomentumRule::GaussLegendre, 24, 96),
        (TimeRule::Exact, MomentumRule::Trapezoid, 12, 400),
        (TimeRule::Trapezoid, MomentumRule::Adaptive, 200, 24),
    ] {
        let quad = QuadratureSpec {
            n_t,
            n_k,
            time_rule,
            momentum_rule,
            ..QuadratureSpec::new(&p)
        };
        let c = evolve(&w0, &p, 0.5, &quad).unwrap().correction();
        let gap: f64 = c.iter().zip(&reference).map(|(a, b)| (a - b).abs()).sum();
        assert!(gap <= 1e-3 * scale, "{time_rule:?}/{momentum_rule:?}: {:.2e}", gap / scale);
    }
}

#[test]
fn strong_coupling_is_flagged() {
    let p = model(3.0, 20.0);
    let w0 = gaussian(grid(32, 0.5));
    let r = evolve(&w0, &p, 1.0, &QuadratureSpec::new(&p)).unwrap();
    assert!(r.diagnostics.non_perturbative);
    assert!(r.diagnostics.perturbative_ratio > PERTURBATIVE_LIMIT);
    let weak = evolve(&w0, &model(0.05, 20.0), 1.0, &QuadratureSpec::new(&p)).unwrap();
    assert!(!weak.diagnostics.non_perturbative);
}

#[test]
fn bad_quadrature_settings_are_listed_together() {
    let p = model(0.1, 20.0);
    let quad = QuadratureSpec {
        n_t: 2,
        n_k: 4,
        k_max: 50.0,
        rel_tol: 0.0,
        ..QuadratureSpec::new(&p)
    };
    let msg = quad.validate(&p).unwrap_err().to_string();
    for key in ["n_t", "n_k", "k_max", "rel_tol"] {
        assert!(msg.contains(key), "{msg}");
    }
    let w0 = gaussian(grid(32, 0.5));
    assert!(matches!(evolve(&w0, &p, 1.0, &quad), Err(Error::InvalidQuadrature(_))));
    assert!(evolve(&w0, &p, -1.0, &QuadratureSpec::new(&p)).is_err());
}

#[test]
fn three_dimensional_runs_are_free_only() {
    let g3 = PhaseSpaceGrid::centered(3, 12, 0.7).unwrap();
    let w0 = make_initial_wigner_tol(&InitialStateSpec::gaussian(0.0, 0.0, 1.0), &g3, 1e-2).unwrap();
    let free = ModelParams::new(3, 1.0, 1.0, 0.0, 20.0).unwrap();
    let r = evolve(&w0, &free, 0.2, &QuadratureSpec::new(&free)).unwrap();
    assert_eq!(r.w_total, evolve_zeroth(&w0, &free, 0.2).unwrap());
    let coupled = ModelParams::new(3, 1.0, 1.0, 0.1, 20.0).unwrap();
    assert!(matches!(
        evolve(&w0, &coupled, 0.2, &QuadratureSpec::new(&coupled)),
        Err(Error::UnsupportedDimension { dim: 3, .. })
    ));
}

#[test]
fn drifting_out_of_the_box_is_an_error() {
    let p = model(0.0, 20.0);
    let w0 = make_initial_wigner(&InitialStateSpec::gaussian(2.0, 3.0, 1.0), &grid(64, 0.25)).unwrap();
    assert!(matches!(evolve_zeroth(&w0, &p, 2.0), Err(Error::BoxLeak(_))));
    let m3 = ModelParams::new(3, 1.0, 1.0, 0.0, 20.0).unwrap();
    assert!(matches!(evolve_zeroth(&w0, &m3, 1.0), Err(Error::GridMismatch(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_evolution_is_a_shear(t in 0.0f64..2.0, x0 in -1.0f64..1.0, p0 in -0.8f64..0.8, m in 1.0f64..3.0) {
        let g = grid(128, 0.2);
        let spec = InitialStateSpec::gaussian(x0, p0, 1.0);
        let w0 = make_initial_wigner(&spec, &g).unwrap();
        let params = ModelParams::new(1, m, 1.0, 0.0, 20.0).unwrap();
        let w = evolve_zeroth(&w0, &params, t).unwrap();
        let want = WignerFunction::from_fn(g, t, |x, p| spec.wigner(&[x[0] - p[0] * t / m], p));
        prop_assert!(w.sup_distance(&want) <= 1e-9);
        let (a, b) = (observables(&w0), observables(&w));
        prop_assert!((b.mean_x[0] - a.mean_x[0] - t * a.mean_p[0] / m).abs() <= 1e-9);
        prop_assert!((b.var_p[0] - a.var_p[0]).abs() <= 1e-10);
    }

    #[test]
    fn free_evolution_composes(t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let g = grid(64, 0.35);
        let w0 = make_initial_wigner(&InitialStateSpec::cat(0.0, 0.0, 1.0, 5.0, 1.0), &g).unwrap();
        let params = model(0.0, 20.0);
        let direct = evolve_zeroth(&w0, &params, t1 + t2).unwrap();
        let split = evolve_zeroth(&evolve_zeroth(&w0, &params, t1).unwrap(), &params, t2).unwrap();
        prop_assert!(direct.sup_distance(&split) <= 1e-8 * direct.max_abs());
        prop_assert!((direct.norm() - w0.norm()).abs() <= 1e-8);
        prop_assert!((observables(&direct).purity - observables(&w0).purity).abs() <= 1e-8);
    }
}
