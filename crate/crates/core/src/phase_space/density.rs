use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::grid::PhaseSpaceGrid;

/// Position-space density matrix sampled on the position nodes of a grid.
///
/// Values are stored row-major over `(x_1..x_d, y_1..y_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub grid: PhaseSpaceGrid,
    pub t: f64,
    pub values: Vec<Complex64>,
    pub normalized: bool,
}

/// Largest position count for which [`DensityMatrix::min_eigenvalue`] runs.
pub const MAX_EIGEN_NODES: usize = 1024;

impl DensityMatrix {
    pub fn new(grid: PhaseSpaceGrid, t: f64, values: Vec<Complex64>, normalized: bool) -> Result<Self> {
        if values.len() != grid.phase_points() {
            return Err(Error::GridMismatch(format!(
                "expected {} density samples, got {}",
                grid.phase_points(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidState(format!("non-finite density entry at flat index {k}")));
        }
        Ok(DensityMatrix {
            grid,
            t,
            values,
            normalized,
        })
    }

    pub fn zeros(grid: PhaseSpaceGrid, t: f64) -> Self {
        DensityMatrix {
            grid,
            t,
            values: vec![Complex64::new(0.0, 0.0); grid.phase_points()],
            normalized: false,
        }
    }

    /// Samples `f(x, y)` at every pair of position nodes.
    pub fn from_fn<F: Fn(&[f64], &[f64]) -> Complex64>(grid: PhaseSpaceGrid, t: f64, f: F) -> Self {
        let d = grid.dim();
        let n = grid.n_x();
        let mut x = vec![0.0; d];
        let mut y = vec![0.0; d];
        let mut idx = vec![0; 2 * d];
        let values = (0..grid.phase_points())
            .map(|flat| {
                crate::fourier::unflatten(flat, n, &mut idx);
                for a in 0..d {
                    x[a] = grid.x(idx[a]);
                    y[a] = grid.x(idx[d + a]);
                }
                f(&x, &y)
            })
            .collect();
        DensityMatrix {
            grid,
            t,
            values,
            normalized: false,
        }
    }

    /// Entry `ρ(r, c)` for flat position indices.
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.values[r * self.grid.positions() + c]
    }

    /// `Σ diag · dx^d`.
    pub fn trace(&self) -> Complex64 {
        let n = self.grid.positions();
        let dv = self.grid.dx().powi(self.grid.dim() as i32);
        (0..n).map(|r| self.at(r, r)).sum::<Complex64>() * dv
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `max |ρ(x, y) − conj ρ(y, x)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.grid.positions();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.at(r, c) - self.at(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Position distribution `ρ(x, x)`, real part.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.grid.positions()).map(|r| self.at(r, r).re).collect()
    }

    /// Smallest eigenvalue of the Hermitian part of `ρ·dx^d`.
    ///
    /// Only available on small grids; the decomposition is dense.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let n = self.grid.positions();
        if n > MAX_EIGEN_NODES {
            return Err(Error::InvalidGrid(format!(
                "eigen-decomposition limited to {MAX_EIGEN_NODES} position nodes, got {n}"
            )));
        }
        let dv = self.grid.dx().powi(self.grid.dim() as i32);
        let m = DMatrix::from_fn(n, n, |r, c| 0.5 * (self.at(r, c) + self.at(c, r).conj()) * dv);
        let eig = m.symmetric_eigen();
        Ok(eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b)))
    }
}
