use crate::error::{Error, Result};

use super::grid::PhaseSpaceGrid;

/// Real phase-space distribution sampled on a grid at time `t`.
///
/// Values are stored row-major over `(x_1..x_d, p_1..p_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerFunction {
    pub grid: PhaseSpaceGrid,
    pub t: f64,
    pub values: Vec<f64>,
    /// Whether the distribution claims to represent a normalized state.
    pub normalized: bool,
}

impl WignerFunction {
    pub fn new(grid: PhaseSpaceGrid, t: f64, values: Vec<f64>, normalized: bool) -> Result<Self> {
        if values.len() != grid.phase_points() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.phase_points(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite Wigner value at flat index {k}")));
        }
        if !t.is_finite() {
            return Err(Error::InvalidState(format!("non-finite time {t}")));
        }
        Ok(WignerFunction {
            grid,
            t,
            values,
            normalized,
        })
    }

    pub fn zeros(grid: PhaseSpaceGrid, t: f64) -> Self {
        WignerFunction {
            grid,
            t,
            values: vec![0.0; grid.phase_points()],
            normalized: false,
        }
    }

    /// Samples `f(x, p)` at every phase-space node.
    pub fn from_fn<F: Fn(&[f64], &[f64]) -> f64>(grid: PhaseSpaceGrid, t: f64, f: F) -> Self {
        let d = grid.dim();
        let n = grid.n_x();
        let mut x = vec![0.0; d];
        let mut p = vec![0.0; d];
        let mut idx = vec![0; 2 * d];
        let values = (0..grid.phase_points())
            .map(|flat| {
                crate::fourier::unflatten(flat, n, &mut idx);
                for a in 0..d {
                    x[a] = grid.x(idx[a]);
                    p[a] = grid.p(idx[d + a]);
                }
                f(&x, &p)
            })
            .collect();
        WignerFunction {
            grid,
            t,
            values,
            normalized: false,
        }
    }

    /// Value at node `(i, m)` of a one-dimensional grid.
    pub fn at(&self, i: usize, m: usize) -> f64 {
        debug_assert_eq!(self.grid.dim(), 1);
        self.values[i * self.grid.n_x() + m]
    }

    /// `∫ W dx dp` by grid summation.
    pub fn norm(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell()
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.cell()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest pointwise difference to another distribution on the same grid.
    pub fn sup_distance(&self, other: &WignerFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest absolute value on the outermost nodes of any axis, relative to the peak.
    pub fn boundary_tail(&self) -> f64 {
        let n = self.grid.n_x();
        let rank = 2 * self.grid.dim();
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let mut idx = vec![0; rank];
        let mut worst: f64 = 0.0;
        for (flat, v) in self.values.iter().enumerate() {
            crate::fourier::unflatten(flat, n, &mut idx);
            if idx.iter().any(|&i| i == 0 || i == n - 1) {
                worst = worst.max(v.abs());
            }
        }
        worst / peak
    }
}
