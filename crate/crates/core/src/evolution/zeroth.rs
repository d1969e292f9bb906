use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{for_each_lane, unflatten, Translator};
use crate::phase_space::WignerFunction;
use crate::propagators::ModelParams;

/// Relative size of shifted mass allowed to land outside the original box.
/// Inputs whose own boundary values exceed this are held to that level
/// instead.
pub const SHEAR_LEAK_TOL: f64 = 1e-9;

/// Smallest power-of-two factor such that a box of `n·factor` nodes holds
/// the original box plus a drift of `drift` on either side.
pub(crate) fn pad_factor(n: usize, dx: f64, drift: f64) -> usize {
    let need = n as f64 * dx + 2.0 * drift;
    let mut pad = 2;
    while (n * pad) as f64 * dx < need {
        pad *= 2;
    }
    pad
}

/// Free evolution of a Wigner function: the ballistic shear
/// `W(x, p, t) = W₀(x − p t/m_S, p)`, evaluated by band-limited
/// interpolation in `x` on a zero-padded box.
pub fn evolve_zeroth(w0: &WignerFunction, params: &ModelParams, t: f64) -> Result<WignerFunction> {
    params.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParams(format!("evolution time must be non-negative, got {t}")));
    }
    if w0.grid.dim() != params.d {
        return Err(Error::GridMismatch(format!(
            "grid dimension {} differs from model dimension {}",
            w0.grid.dim(),
            params.d
        )));
    }
    if t == 0.0 {
        return Ok(w0.clone());
    }
    let grid = w0.grid;
    let d = grid.dim();
    let n = grid.n_x();
    let rank = 2 * d;
    let dx = grid.dx();
    let p_edge = grid.p(0).abs().max(grid.p(n - 1).abs());
    let pad = pad_factor(n, dx, p_edge * t / params.m_s);
    let n_pad = n * pad;
    let off = (n_pad - n) / 2;
    let shifter = Translator::new(n_pad);
    let mut scratch = shifter.scratch();
    let mut padded = vec![Complex64::new(0.0, 0.0); n_pad];
    let mut reduced = vec![0; rank - 1];
    let peak = w0.max_abs();
    let limit = SHEAR_LEAK_TOL.max(w0.boundary_tail()) * peak;

    let mut data: Vec<Complex64> = w0.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut leak: Option<(usize, usize, usize, f64)> = None;
    for axis in 0..d {
        for_each_lane(&mut data, n, rank, axis, |lane, lane_index| {
            unflatten(lane_index, n, &mut reduced);
            let m = reduced[d + axis - 1];
            let shift = -grid.p(m) * t / (params.m_s * dx);
            padded.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            padded[off..off + n].copy_from_slice(lane);
            shifter.shift(&mut padded, shift, &mut scratch);
            if leak.is_none() {
                if let Some(j) = padded
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j < off || *j >= off + n)
                    .find(|(_, v)| v.norm() > limit)
                    .map(|(j, _)| j)
                {
                    leak = Some((axis, j, m, padded[j].norm()));
                }
            }
            for (dst, src) in lane.iter_mut().zip(&padded[off..off + n]) {
                *dst = Complex64::new(src.re, 0.0);
            }
        });
        if let Some((axis, j, m, v)) = leak {
            let x = grid.x_min() + (j as f64 - off as f64) * dx;
            return Err(Error::BoxLeak(format!(
                "free drift carries |W| = {v:.3e} to x = {x:.6} (axis {axis}, p = {:.6}), outside the box [{:.6}, {:.6}]",
                grid.p(m),
                grid.x(0),
                grid.x(n - 1)
            )));
        }
    }
    let values = data.iter().map(|v| v.re).collect();
    WignerFunction::new(grid, w0.t + t, values, w0.normalized)
}
