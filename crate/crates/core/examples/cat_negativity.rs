//! Interference fringes of a two-packet superposition: negativity volume
//! and fringe depth as the packets are pulled apart.

use wigner_direct::phase_space::*;

fn main() -> wigner_direct::error::Result<()> {
    let grid = PhaseSpaceGrid::centered(1, 128, 0.2)?;
    println!("{:>10} {:>12} {:>12} {:>12} {:>10}", "separation", "negativity", "purity", "W(0, 0)", "min W");
    for separation in [0.0, 1.0, 2.0, 4.0, 6.0, 8.0] {
        let spec = InitialStateSpec::cat(0.0, 0.0, 1.0, separation, 0.0);
        let w = make_initial_wigner(&spec, &grid)?;
        let obs = observables(&w);
        let min = w.values.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "{separation:>10.1} {:>12.6} {:>12.8} {:>12.6} {:>10.5}",
            obs.negativity_volume,
            obs.purity,
            spec.wigner_1d(0.0, 0.0),
            min
        );
    }

    // An odd cat has a negative centre.
    let odd = InitialStateSpec::cat(0.0, 0.0, 1.0, 6.0, std::f64::consts::PI);
    println!("\nodd cat, W(0, 0) = {:.6}", odd.wigner_1d(0.0, 0.0));

    let w = make_initial_wigner(&odd, &grid)?;
    let m = marginals(&w);
    let peak = m.position.iter().cloned().fold(0.0, f64::max);
    let centre = m.position[grid.n_x() / 2];
    println!("position marginal: peak {peak:.5}, at x = 0 {centre:.2e}");
    Ok(())
}
