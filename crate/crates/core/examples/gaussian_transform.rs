//! Density matrix of a moving Gaussian packet, its Wigner function, and
//! the way back.

use std::f64::consts::PI;

use wigner_direct::phase_space::*;

fn main() -> wigner_direct::error::Result<()> {
    let grid = PhaseSpaceGrid::centered(1, 128, 0.2)?;
    let spec = InitialStateSpec::gaussian(0.5, -0.4, 1.2);

    let rho = make_initial_density(&spec, &grid)?;
    let (w, residue) = wigner_from_density_report(&rho, &grid)?;
    let closed = make_initial_wigner(&spec, &grid)?;
    let back = density_from_wigner(&w);

    let round_trip = back
        .values
        .iter()
        .zip(&rho.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    println!("grid: {} x {} nodes, dx = {}, dp = {:.5}", grid.n_x(), grid.n_x(), grid.dx(), grid.dp());
    println!("largest imaginary part before projection: {residue:.2e}");
    println!("sup |W - closed form|:                    {:.2e}", w.sup_distance(&closed));
    println!("sup |rho - rho'| after the round trip:     {round_trip:.2e}");

    let obs = observables(&w);
    println!();
    println!("norm        {:.12}", obs.norm);
    println!("purity      {:.12}", obs.purity);
    println!("<x>, <p>    {:.6}, {:.6}", obs.mean_x[0], obs.mean_p[0]);
    println!("var x, p    {:.6}, {:.6}  (sigma^2 = {}, 1/(4 sigma^2) = {:.6})", obs.var_x[0], obs.var_p[0], 1.44, 1.0 / (4.0 * 1.44));
    println!("W peak      {:.6}  (1/pi = {:.6})", w.max_abs(), 1.0 / PI);
    Ok(())
}
