use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::fourier::{for_each_lane, unflatten, Translator};

use super::wigner::WignerFunction;

/// Position and momentum distributions, each sampled on `n_x^d` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals {
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
}

/// `∫dp W(x, p)` and `∫dx W(x, p)` by grid summation.
pub fn marginals(w: &WignerFunction) -> Marginals {
    let grid = w.grid;
    let npos = grid.positions();
    let dv_x = grid.dx().powi(grid.dim() as i32);
    let dv_p = grid.dp().powi(grid.dim() as i32);
    let mut position = vec![0.0; npos];
    let mut momentum = vec![0.0; npos];
    for (r, row) in w.values.chunks_exact(npos).enumerate() {
        for (m, v) in row.iter().enumerate() {
            position[r] += v * dv_p;
            momentum[m] += v * dv_x;
        }
    }
    Marginals { position, momentum }
}

/// Subdivision per axis used for `∫|W|` on one-dimensional grids.
pub const NEGATIVITY_REFINEMENT: usize = 4;

/// `Σ|W|` over the grid refined `r`-fold per axis by band-limited
/// interpolation, scaled to the original cell. One-dimensional grids only.
fn refined_abs_sum(w: &WignerFunction, r: usize) -> f64 {
    let n = w.grid.n_x();
    let shifter = Translator::new(n);
    let mut scratch = shifter.scratch();
    let base: Vec<Complex64> = w.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut total = 0.0;
    for sx in 0..r {
        let mut by_x = base.clone();
        if sx > 0 {
            for_each_lane(&mut by_x, n, 2, 0, |lane, _| {
                shifter.shift(lane, sx as f64 / r as f64, &mut scratch)
            });
        }
        for sp in 0..r {
            let mut data = by_x.clone();
            if sp > 0 {
                for_each_lane(&mut data, n, 2, 1, |lane, _| {
                    shifter.shift(lane, sp as f64 / r as f64, &mut scratch)
                });
            }
            total += data.iter().map(|v| v.re.abs()).sum::<f64>();
        }
    }
    total / (r * r) as f64
}

/// Scalar diagnostics of a phase-space distribution.
///
/// Moments are normalized by `norm`; per-axis entries follow the grid axes.
/// In one dimension the `∫|W|` part of the negativity volume is taken on a
/// [`NEGATIVITY_REFINEMENT`]-fold interpolated grid, since the plain node
/// sum of `|W|` is only first-order accurate across the interference
/// fringes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub norm: f64,
    pub purity: f64,
    pub negativity_volume: f64,
    pub mean_x: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub var_x: Vec<f64>,
    pub var_p: Vec<f64>,
}

pub fn observables(w: &WignerFunction) -> Observables {
    let grid = w.grid;
    let d = grid.dim();
    let n = grid.n_x();
    let cell = grid.cell();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut sum_abs = 0.0;
    let mut mx = vec![0.0; d];
    let mut mp = vec![0.0; d];
    let mut mx2 = vec![0.0; d];
    let mut mp2 = vec![0.0; d];
    let mut idx = vec![0; 2 * d];
    for (flat, &v) in w.values.iter().enumerate() {
        unflatten(flat, n, &mut idx);
        sum += v;
        sum_sq += v * v;
        sum_abs += v.abs();
        for a in 0..d {
            let x = grid.x(idx[a]);
            let p = grid.p(idx[d + a]);
            mx[a] += x * v;
            mp[a] += p * v;
            mx2[a] += x * x * v;
            mp2[a] += p * p * v;
        }
    }
    if d == 1 {
        sum_abs = refined_abs_sum(w, NEGATIVITY_REFINEMENT);
    }
    let norm = sum * cell;
    let scale = |s: f64| if sum != 0.0 { s / sum } else { 0.0 };
    let mean_x: Vec<f64> = mx.iter().map(|&s| scale(s)).collect();
    let mean_p: Vec<f64> = mp.iter().map(|&s| scale(s)).collect();
    let var_x = mx2
        .iter()
        .zip(&mean_x)
        .map(|(&s, m)| scale(s) - m * m)
        .collect();
    let var_p = mp2
        .iter()
        .zip(&mean_p)
        .map(|(&s, m)| scale(s) - m * m)
        .collect();
    Observables {
        norm,
        purity: (2.0 * PI).powi(d as i32) * sum_sq * cell,
        negativity_volume: (sum_abs - sum) * cell,
        mean_x,
        mean_p,
        var_x,
        var_p,
    }
}
