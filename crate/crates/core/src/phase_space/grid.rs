use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform phase-space grid shared by all spatial axes.
///
/// Positions are `x_i = x_min + i·dx`. Momenta use the spacing forced by
/// the `exp(2ip·z)` kernel of the Wigner transform: `dp = π/(n_x·dx)` and
/// `p_m = (m − n_x/2)·dp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    d: usize,
    n_x: usize,
    dx: f64,
    x_min: f64,
}

impl PhaseSpaceGrid {
    pub fn new(d: usize, n_x: usize, dx: f64, x_min: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if d != 1 && d != 3 {
            problems.push(format!("dimension must be 1 or 3, got {d}"));
        }
        if n_x < 8 || n_x % 2 != 0 {
            problems.push(format!("n_x must be even and at least 8, got {n_x}"));
        }
        if !(dx.is_finite() && dx > 0.0) {
            problems.push(format!("dx must be positive and finite, got {dx}"));
        }
        if !x_min.is_finite() {
            problems.push(format!("x_min must be finite, got {x_min}"));
        } else if dx.is_finite() && !(x_min + dx * n_x as f64).is_finite() {
            problems.push("grid nodes overflow".to_string());
        }
        if !problems.is_empty() {
            return Err(Error::InvalidGrid(problems.join("; ")));
        }
        Ok(PhaseSpaceGrid { d, n_x, dx, x_min })
    }

    /// Grid centred on the origin: `x_min = -n_x/2 · dx`.
    pub fn centered(d: usize, n_x: usize, dx: f64) -> Result<Self> {
        Self::new(d, n_x, dx, -(n_x as f64 / 2.0) * dx)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn dp(&self) -> f64 {
        PI / (self.n_x as f64 * self.dx)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + self.dx * i as f64
    }

    pub fn p(&self, m: usize) -> f64 {
        (m as f64 - self.n_x as f64 / 2.0) * self.dp()
    }

    /// Half-separation node `z_j = (j − n_x/2)·dx`.
    pub fn z(&self, j: usize) -> f64 {
        (j as f64 - self.n_x as f64 / 2.0) * self.dx
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        (0..self.n_x).map(|i| self.x(i)).collect()
    }

    pub fn p_nodes(&self) -> Vec<f64> {
        (0..self.n_x).map(|m| self.p(m)).collect()
    }

    pub fn box_length(&self) -> f64 {
        self.n_x as f64 * self.dx
    }

    /// Number of position nodes, `n_x^d`.
    pub fn positions(&self) -> usize {
        self.n_x.pow(self.d as u32)
    }

    /// Number of phase-space nodes, `n_x^(2d)`.
    pub fn phase_points(&self) -> usize {
        self.n_x.pow(2 * self.d as u32)
    }

    /// Phase-space cell volume `(dx·dp)^d`.
    pub fn cell(&self) -> f64 {
        (self.dx * self.dp()).powi(self.d as i32)
    }

    /// Centre of the position box.
    pub fn x_center(&self) -> f64 {
        self.x_min + 0.5 * self.dx * (self.n_x - 1) as f64
    }

    pub fn contains_x(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x(self.n_x - 1)
    }

    pub fn contains_p(&self, p: f64) -> bool {
        p >= self.p(0) && p <= self.p(self.n_x - 1)
    }
}
