use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{flatten, for_each_lane, unflatten, CenteredDft, Sign, Translator};

use super::density::DensityMatrix;
use super::grid::PhaseSpaceGrid;
use super::wigner::WignerFunction;

/// Relative Hermiticity defect above which a density matrix is rejected.
pub const HERMITICITY_TOL: f64 = 1e-8;
/// Relative imaginary residue above which a forward transform is rejected.
pub const IMAG_TOL: f64 = 1e-8;

/// Wigner function of `rho` on `grid`:
/// `W(x, p) = π^(-d) ∫ d^dz ρ(x − z, x + z) exp(2ip·z)`.
pub fn wigner_from_density(rho: &DensityMatrix, grid: &PhaseSpaceGrid) -> Result<WignerFunction> {
    wigner_from_density_report(rho, grid).map(|(w, _)| w)
}

/// As [`wigner_from_density`], also returning the largest discarded
/// imaginary part.
pub fn wigner_from_density_report(
    rho: &DensityMatrix,
    grid: &PhaseSpaceGrid,
) -> Result<(WignerFunction, f64)> {
    if rho.grid != *grid {
        return Err(Error::GridMismatch(
            "density matrix is sampled on a different grid".to_string(),
        ));
    }
    let scale = rho.max_abs();
    let defect = rho.hermiticity_defect();
    if defect > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian {
            defect,
            tolerance: HERMITICITY_TOL * scale,
        });
    }

    let d = grid.dim();
    let n = grid.n_x();
    let half = (n / 2) as i64;
    let rank = 2 * d;
    let npos = grid.positions();

    let mut data = vec![Complex64::new(0.0, 0.0); grid.phase_points()];
    let mut idx = vec![0; rank];
    let mut r = vec![0; d];
    let mut c = vec![0; d];
    'outer: for (flat, slot) in data.iter_mut().enumerate() {
        unflatten(flat, n, &mut idx);
        for a in 0..d {
            let i = idx[a] as i64;
            let j = idx[d + a] as i64 - half;
            if j == -half {
                continue 'outer;
            }
            let (ra, ca) = (i - j, i + j);
            if ra < 0 || ca < 0 || ra >= n as i64 || ca >= n as i64 {
                continue 'outer;
            }
            r[a] = ra as usize;
            c[a] = ca as usize;
        }
        *slot = rho.values[flatten(&r, n) * npos + flatten(&c, n)];
    }

    let dft = CenteredDft::new(n);
    let mut scratch = dft.scratch();
    for axis in d..rank {
        for_each_lane(&mut data, n, rank, axis, |lane, _| {
            dft.apply(lane, Sign::Plus, &mut scratch)
        });
    }

    let pref = (grid.dx() / PI).powi(d as i32);
    let mut residue: f64 = 0.0;
    let mut values = Vec::with_capacity(data.len());
    for v in &data {
        residue = residue.max((v.im * pref).abs());
        values.push(v.re * pref);
    }
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 0.0 && residue > IMAG_TOL * peak {
        return Err(Error::NotHermitian {
            defect: residue,
            tolerance: IMAG_TOL * peak,
        });
    }
    let w = WignerFunction::new(*grid, rho.t, values, rho.normalized)?;
    Ok((w, residue))
}

/// Density matrix of a Wigner function:
/// `ρ(x, y) = ∫ d^dp W((x + y)/2, p) exp(−ip·(y − x))`.
///
/// Odd separations need the midpoint half a node off the grid; those come
/// from trigonometric interpolation of `W` along the position axes.
pub fn density_from_wigner(w: &WignerFunction) -> DensityMatrix {
    let grid = w.grid;
    let d = grid.dim();
    let n = grid.n_x();
    let half = (n / 2) as i64;
    let rank = 2 * d;
    let npos = grid.positions();

    let dft = CenteredDft::new(n);
    let mut dft_scratch = dft.scratch();
    let shifter = Translator::new(n);
    let mut shift_scratch = shifter.scratch();
    let pref = grid.dp().powi(d as i32);

    let mut rho = vec![Complex64::new(0.0, 0.0); grid.phase_points()];
    let mut idx = vec![0; rank];
    let mut r = vec![0; d];
    let mut c = vec![0; d];

    for pattern in 0..(1usize << d) {
        let odd = |a: usize| (pattern >> a) & 1 == 1;
        let mut data: Vec<Complex64> = w.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for a in 0..d {
            if odd(a) {
                for_each_lane(&mut data, n, rank, a, |lane, _| {
                    shifter.shift(lane, 0.5, &mut shift_scratch)
                });
            }
        }
        for a in 0..d {
            let twist: Vec<Complex64> = (0..n)
                .map(|m| {
                    if odd(a) {
                        let mm = m as f64 - half as f64;
                        Complex64::from_polar(1.0, -PI * mm / n as f64)
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                })
                .collect();
            for_each_lane(&mut data, n, rank, d + a, |lane, _| {
                for (v, t) in lane.iter_mut().zip(&twist) {
                    *v *= t;
                }
                dft.apply(lane, Sign::Minus, &mut dft_scratch);
            });
        }
        'scatter: for (flat, v) in data.iter().enumerate() {
            unflatten(flat, n, &mut idx);
            for a in 0..d {
                let i = idx[a] as i64;
                let j = idx[d + a] as i64 - half;
                let s = odd(a) as i64;
                let (ra, ca) = (i - j, i + j + s);
                if ra < 0 || ca < 0 || ra >= n as i64 || ca >= n as i64 {
                    continue 'scatter;
                }
                r[a] = ra as usize;
                c[a] = ca as usize;
            }
            rho[flatten(&r, n) * npos + flatten(&c, n)] = v * pref;
        }
    }
    DensityMatrix {
        grid,
        t: w.t,
        values: rho,
        normalized: w.normalized,
    }
}
