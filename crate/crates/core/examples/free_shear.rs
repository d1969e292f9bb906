//! Free evolution of a Wigner function is a shear along x. The position
//! variance grows as sigma^2 + t^2 var(p) / m^2.

use wigner_direct::evolution::evolve_zeroth;
use wigner_direct::phase_space::*;
use wigner_direct::propagators::ModelParams;

fn main() -> wigner_direct::error::Result<()> {
    let grid = PhaseSpaceGrid::centered(1, 128, 0.2)?;
    let params = ModelParams::new(1, 2.0, 1.0, 0.0, 50.0)?;
    let spec = InitialStateSpec::gaussian(-2.0, 1.0, 0.7);
    let w0 = make_initial_wigner(&spec, &grid)?;
    let o0 = observables(&w0);

    println!("{:>5} {:>10} {:>12} {:>12} {:>10} {:>11}", "t", "<x>", "var x", "law", "norm", "shear err");
    for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let w = evolve_zeroth(&w0, &params, t)?;
        let o = observables(&w);
        let law = o0.var_x[0] + t * t * o0.var_p[0] / (params.m_s * params.m_s);
        let exact = WignerFunction::from_fn(grid, t, |x, p| spec.wigner(&[x[0] - p[0] * t / params.m_s], p));
        println!(
            "{t:>5.1} {:>10.6} {:>12.8} {:>12.8} {:>10.8} {:>11.2e}",
            o.mean_x[0],
            o.var_x[0],
            law,
            o.norm,
            w.sup_distance(&exact)
        );
    }

    let a = evolve_zeroth(&evolve_zeroth(&w0, &params, 1.5)?, &params, 2.5)?;
    let b = evolve_zeroth(&w0, &params, 4.0)?;
    println!("\ncomposition 1.5 + 2.5 vs 4: {:.2e}", a.sup_distance(&b));

    match evolve_zeroth(&w0, &params, 40.0) {
        Ok(_) => println!("t = 40 stayed in the box"),
        Err(e) => println!("t = 40: {e}"),
    }
    Ok(())
}
