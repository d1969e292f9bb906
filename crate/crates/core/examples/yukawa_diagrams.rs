//! Order-g² corrections for a Gaussian packet: the gain term, the two loss
//! terms, and how well they cancel in the trace.

use wigner_direct::evolution::{evolve, QuadratureSpec};
use wigner_direct::phase_space::*;
use wigner_direct::propagators::ModelParams;

fn main() -> wigner_direct::error::Result<()> {
    let grid = PhaseSpaceGrid::centered(1, 64, 0.35)?;
    let params = ModelParams::new(1, 1.0, 1.0, 0.1, 50.0)?;
    let quad = QuadratureSpec::new(&params);
    let w0 = make_initial_wigner(&InitialStateSpec::gaussian(0.0, 0.3, 1.0), &grid)?;

    for t in [0.25, 0.5, 1.0] {
        let r = evolve(&w0, &params, t, &quad)?;
        let d = &r.diagnostics;
        let cell = grid.cell();
        let sum = |v: &[f64]| v.iter().sum::<f64>() * cell;
        println!("t = {t}");
        println!("  ∫gain {:.6e}   ∫loss_left {:.6e}   ∫loss_right {:.6e}", sum(&r.w_gain.re), sum(&r.w_loss_left.re), sum(&r.w_loss_right.re));
        println!(
            "  trace defect {:.2e} (error {:.1e}), relative to |gain|_1: {:.2e}",
            d.trace_defect_g2,
            d.trace_defect_error,
            d.trace_defect_g2.abs() / d.gain_l1
        );
        println!("  gain kicked outside the momentum window: {:.2e}", d.gain_outside_grid);
        println!(
            "  perturbative ratio {:.3e}, max Im W {:.1e}, quadrature converged: {}",
            d.perturbative_ratio,
            d.max_imag_residue,
            d.quadrature_converged()
        );
        let (o0, o) = (observables(&r.w_zeroth), observables(&r.w_total));
        println!(
            "  var p: free {:.8} -> coupled {:.8}; purity {:.8} -> {:.8}",
            o0.var_p[0], o.var_p[0], o0.purity, o.purity
        );
    }
    Ok(())
}
