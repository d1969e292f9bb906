//! Negativity loss of a cat state at fixed time as the field temperature
//! rises.

use wigner_direct::evolution::{evolve, QuadratureSpec};
use wigner_direct::phase_space::*;
use wigner_direct::propagators::ModelParams;

fn main() -> wigner_direct::error::Result<()> {
    let grid = PhaseSpaceGrid::centered(1, 64, 0.35)?;
    let w0 = make_initial_wigner(&InitialStateSpec::cat(0.0, 0.0, 1.0, 6.0, 0.0), &grid)?;
    let neg0 = observables(&w0).negativity_volume;
    let t = 1.0;
    println!("t = {t}, initial negativity {neg0:.8}");
    println!("{:>6} {:>14} {:>12} {:>14}", "T", "negativity", "lost", "pert. ratio");
    for temperature in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let params = ModelParams::new(1, 1.0, 1.0, 0.1, 50.0)?.with_temperature(temperature)?;
        let r = evolve(&w0, &params, t, &QuadratureSpec::new(&params))?;
        let neg = observables(&r.w_total).negativity_volume;
        println!(
            "{temperature:>6.1} {neg:>14.8} {:>12.3e} {:>14.3e}",
            neg0 - neg,
            r.diagnostics.perturbative_ratio
        );
    }
    Ok(())
}
