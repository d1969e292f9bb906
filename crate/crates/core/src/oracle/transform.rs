//! Wigner transform at individual probes, without fast transforms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::DensityMatrix;

use super::cc::{integrate, CcTolerance, Estimate};
use super::{ProbeSet, ProbeStatus, ProbeValue};

/// `W(x, p) = (1/π) ∫dz ρ(x − z, x + z) e^{2ipz}` by adaptive quadrature
/// over `|z| ≤ z_max` at every probe.
pub fn oracle_wigner_transform<F>(rho: F, probes: &ProbeSet, z_max: f64, rel_tol: f64) -> Vec<ProbeValue>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    probes
        .points
        .par_iter()
        .map(|&(x, p)| {
            let q = integrate(
                |z| Estimate::exact(rho(x - z, x + z) * Complex64::from_polar(1.0, 2.0 * p * z)),
                -z_max,
                z_max,
                &[0.0],
                CcTolerance {
                    abs: 1e-15,
                    rel: rel_tol,
                    max_evals: 2_000_000,
                },
            );
            ProbeValue::from_estimate(x, p, Estimate { value: q.value / PI, error: q.error / PI, ..q })
        })
        .collect()
}

/// The same transform of a sampled density matrix as an explicit sum over
/// the grid offsets `z_J = J dx`. Probes must sit on position nodes.
pub fn oracle_wigner_transform_grid(rho: &DensityMatrix, probes: &ProbeSet) -> Result<Vec<ProbeValue>> {
    let grid = rho.grid;
    if grid.dim() != 1 || probes.grid.dim() != 1 {
        return Err(Error::UnsupportedDimension {
            operation: "direct-sum Wigner oracle",
            dim: grid.dim(),
        });
    }
    let n = grid.n_x() as i64;
    let dx = grid.dx();
    let mut out = Vec::with_capacity(probes.points.len());
    for &(x, p) in &probes.points {
        let fi = (x - grid.x_min()) / dx;
        let i = fi.round();
        if (fi - i).abs() > 1e-9 || i < 0.0 || i >= n as f64 {
            return Err(Error::GridMismatch(format!("probe x = {x} is not a position node")));
        }
        let i = i as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in -n..=n {
            let (r, c) = (i - j, i + j);
            if r < 0 || c < 0 || r >= n || c >= n {
                continue;
            }
            acc += rho.at(r as usize, c as usize) * Complex64::from_polar(1.0, 2.0 * p * j as f64 * dx);
        }
        let w = acc * dx / PI;
        out.push(ProbeValue {
            x,
            p,
            value: (w.re, w.im),
            error: 0.0,
            evaluations: (2 * n + 1) as u64,
            status: ProbeStatus::Converged,
        });
    }
    Ok(out)
}
