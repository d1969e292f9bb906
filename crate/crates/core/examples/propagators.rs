//! Closed-form particle propagators against the contour integral with a
//! finite damping, and the field's equal-time Wightman function against
//! the Bessel function K0.

use std::f64::consts::PI;

use wigner_direct::oracle::{bessel_k0, epsilon_extrapolated_propagator};
use wigner_direct::propagators::*;

fn main() -> wigner_direct::error::Result<()> {
    let params = ModelParams::new(1, 1.0, 1.0, 0.0, 200.0)?;
    let eps = [0.01, 0.005, 0.0025, 0.00125, 0.000625];

    println!("G^F(t, x; 0, 0)");
    for (t, x) in [(0.5, 0.0), (1.0, 2.0), (2.5, -1.0), (-1.0, 0.5)] {
        let a = SpacetimePoint::at(t, x);
        let b = SpacetimePoint::at(0.0, 0.0);
        let closed = sys_feynman(&a, &b, &params)?;
        let num = epsilon_extrapolated_propagator(&a, &b, &params, &eps)?;
        println!(
            "  t = {t:>4}, x = {x:>4}: closed {:>+.8} {:>+.8}i   extrapolated {:>+.8} {:>+.8}i   residual {:.1e}",
            closed.re, closed.im, num.value.0, num.value.1, num.residual
        );
    }
    let a = SpacetimePoint::at(1.0, 0.3);
    let b = SpacetimePoint::at(0.0, -0.2);
    let d = sys_dyson(&b, &a, &params)?;
    let f = sys_feynman(&a, &b, &params)?;
    println!("  G^D(b; a) - conj G^F(a; b) = {:.1e}", (d - f.conj()).norm());

    println!("\nequal-time Wightman function, cutoff {}", params.cutoff);
    for r in [0.5, 1.0, 2.0, 4.0] {
        let w = env_wightman(&SpacetimePoint::at(0.0, 0.0), &SpacetimePoint::at(0.0, r), &params)?;
        let k0 = bessel_k0(r).value.re / (2.0 * PI);
        println!("  r = {r}: {:.10}   K0(r)/2pi = {:.10}   rel {:.1e}", w.re, k0, (w.re - k0).abs() / k0);
    }

    let hot = params.with_temperature(1.0)?;
    let (x, y) = (SpacetimePoint::at(0.5, 0.0), SpacetimePoint::at(0.0, 0.7));
    println!("\nunequal times, vacuum vs T = 1");
    for p in [&params, &hot] {
        let w = env_wightman(&x, &y, p)?;
        let fe = env_feynman(&x, &y, p)?;
        println!("  {:<16} Δ< = {:+.6} {:+.6}i   Δ^F = {:+.6} {:+.6}i", format!("T = {}", p.temperature), w.re, w.im, fe.re, fe.im);
    }
    Ok(())
}
