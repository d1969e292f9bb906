//! A cat state coupled to the vacuum field: fringe contrast and negativity
//! over time, with and without the coupling.

use wigner_direct::evolution::{evolve, QuadratureSpec};
use wigner_direct::phase_space::*;
use wigner_direct::propagators::ModelParams;

fn main() -> wigner_direct::error::Result<()> {
    let grid = PhaseSpaceGrid::centered(1, 64, 0.35)?;
    let spec = InitialStateSpec::cat(0.0, 0.0, 1.0, 6.0, 0.0);
    let w0 = make_initial_wigner(&spec, &grid)?;
    let free = ModelParams::new(1, 1.0, 1.0, 0.0, 50.0)?;
    let coupled = free.with_coupling(0.1);
    let quad = QuadratureSpec::new(&coupled);

    println!("{:>5} {:>14} {:>14} {:>14} {:>12}", "t", "neg (g = 0)", "neg (g = 0.1)", "difference", "purity");
    let mut previous = f64::INFINITY;
    let mut monotone = true;
    for t in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5] {
        let a = observables(&evolve(&w0, &free, t, &quad)?.w_total);
        let r = evolve(&w0, &coupled, t, &quad)?;
        let b = observables(&r.w_total);
        monotone &= b.negativity_volume <= previous;
        previous = b.negativity_volume;
        println!(
            "{t:>5.2} {:>14.8} {:>14.8} {:>14.3e} {:>12.8}",
            a.negativity_volume,
            b.negativity_volume,
            b.negativity_volume - a.negativity_volume,
            b.purity
        );
    }
    println!("negativity non-increasing with the coupling on: {monotone}");
    Ok(())
}
