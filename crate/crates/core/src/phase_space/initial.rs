use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::unflatten;

use super::density::DensityMatrix;
use super::grid::PhaseSpaceGrid;
use super::wigner::WignerFunction;

/// Default bound on boundary values relative to the peak.
pub const DEFAULT_LEAK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Gaussian,
    Cat,
}

/// Closed-form pure initial state.
///
/// The displacement `x0`, boost `p0`, cat separation and phase act along
/// the first axis. In three dimensions the remaining axes carry a centred
/// Gaussian of the same width.
///
/// A cat state is `N [φ(x0 + s/2) + e^{iθ} φ(x0 − s/2)]` where each `φ`
/// is a Gaussian packet of width `σ` and mean momentum `p0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialStateSpec {
    pub kind: StateKind,
    pub x0: f64,
    pub p0: f64,
    pub sigma: f64,
    pub separation: f64,
    pub phase: f64,
}

fn gauss_w(x: f64, p: f64, sigma: f64) -> f64 {
    (-(x * x) / (2.0 * sigma * sigma) - 2.0 * sigma * sigma * p * p).exp() / PI
}

impl InitialStateSpec {
    pub fn gaussian(x0: f64, p0: f64, sigma: f64) -> Self {
        InitialStateSpec {
            kind: StateKind::Gaussian,
            x0,
            p0,
            sigma,
            separation: 0.0,
            phase: 0.0,
        }
    }

    pub fn cat(x0: f64, p0: f64, sigma: f64, separation: f64, phase: f64) -> Self {
        InitialStateSpec {
            kind: StateKind::Cat,
            x0,
            p0,
            sigma,
            separation,
            phase,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (name, v) in [
            ("x0", self.x0),
            ("p0", self.p0),
            ("sigma", self.sigma),
            ("separation", self.separation),
            ("phase", self.phase),
        ] {
            if !v.is_finite() {
                problems.push(format!("{name} must be finite, got {v}"));
            }
        }
        if !(self.sigma > 0.0) {
            problems.push(format!("sigma must be positive, got {}", self.sigma));
        }
        if self.kind == StateKind::Cat {
            if !(self.separation >= 0.0) {
                problems.push(format!("separation must be non-negative, got {}", self.separation));
            } else if self.cat_norm_denominator() < 1e-12 {
                problems.push("cat components cancel; the state has zero norm".to_string());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidState(problems.join("; ")))
        }
    }

    fn cat_norm_denominator(&self) -> f64 {
        let s = self.separation;
        2.0 * (1.0 + self.phase.cos() * (-s * s / (8.0 * self.sigma * self.sigma)).exp())
    }

    /// Wigner function along the first axis.
    pub fn wigner_1d(&self, x: f64, p: f64) -> f64 {
        let (u, v) = (x - self.x0, p - self.p0);
        match self.kind {
            StateKind::Gaussian => gauss_w(u, v, self.sigma),
            StateKind::Cat => {
                let s = self.separation;
                let n2 = 1.0 / self.cat_norm_denominator();
                n2 * (gauss_w(u - 0.5 * s, v, self.sigma)
                    + gauss_w(u + 0.5 * s, v, self.sigma)
                    + 2.0 * gauss_w(u, v, self.sigma) * (s * v + self.phase).cos())
            }
        }
    }

    pub fn wigner(&self, x: &[f64], p: &[f64]) -> f64 {
        let mut w = self.wigner_1d(x[0], p[0]);
        for a in 1..x.len() {
            w *= gauss_w(x[a], p[a], self.sigma);
        }
        w
    }

    fn packet(&self, x: f64, center: f64, p0: f64) -> Complex64 {
        let s2 = self.sigma * self.sigma;
        let amp = (2.0 * PI * s2).powf(-0.25);
        Complex64::from_polar(amp * (-(x - center).powi(2) / (4.0 * s2)).exp(), p0 * x)
    }

    pub fn wavefunction_1d(&self, x: f64) -> Complex64 {
        match self.kind {
            StateKind::Gaussian => self.packet(x, self.x0, self.p0),
            StateKind::Cat => {
                let h = 0.5 * self.separation;
                let n = self.cat_norm_denominator().sqrt().recip();
                (self.packet(x, self.x0 + h, self.p0)
                    + Complex64::from_polar(1.0, self.phase) * self.packet(x, self.x0 - h, self.p0))
                    * n
            }
        }
    }

    pub fn wavefunction(&self, x: &[f64]) -> Complex64 {
        let mut psi = self.wavefunction_1d(x[0]);
        for &xa in &x[1..] {
            psi *= self.packet(xa, 0.0, 0.0);
        }
        psi
    }

    /// `ρ(x, y) = ψ(x) ψ*(y)`.
    pub fn density(&self, x: &[f64], y: &[f64]) -> Complex64 {
        self.wavefunction(x) * self.wavefunction(y).conj()
    }
}

/// Samples the closed-form Wigner function, rejecting states whose
/// boundary values exceed [`DEFAULT_LEAK_TOL`] of the peak.
pub fn make_initial_wigner(spec: &InitialStateSpec, grid: &PhaseSpaceGrid) -> Result<WignerFunction> {
    make_initial_wigner_tol(spec, grid, DEFAULT_LEAK_TOL)
}

/// As [`make_initial_wigner`] with an explicit relative leak tolerance.
pub fn make_initial_wigner_tol(
    spec: &InitialStateSpec,
    grid: &PhaseSpaceGrid,
    tol: f64,
) -> Result<WignerFunction> {
    spec.validate()?;
    let mut w = WignerFunction::from_fn(*grid, 0.0, |x, p| spec.wigner(x, p));
    w.normalized = true;
    check_leak(&w, tol)?;
    Ok(w)
}

/// Density matrix of the closed-form state on the grid's position nodes.
pub fn make_initial_density(spec: &InitialStateSpec, grid: &PhaseSpaceGrid) -> Result<DensityMatrix> {
    spec.validate()?;
    let mut rho = DensityMatrix::from_fn(*grid, 0.0, |x, y| spec.density(x, y));
    rho.normalized = true;
    Ok(rho)
}

pub(crate) fn check_leak(w: &WignerFunction, tol: f64) -> Result<()> {
    let grid = w.grid;
    let n = grid.n_x();
    let d = grid.dim();
    let peak = w.max_abs();
    let mut idx = vec![0; 2 * d];
    for (flat, v) in w.values.iter().enumerate() {
        unflatten(flat, n, &mut idx);
        if idx.iter().any(|&i| i == 0 || i == n - 1) && v.abs() > tol * peak {
            let xs: Vec<String> = (0..d).map(|a| format!("{:.6}", grid.x(idx[a]))).collect();
            let ps: Vec<String> = (0..d).map(|a| format!("{:.6}", grid.p(idx[d + a]))).collect();
            return Err(Error::BoxLeak(format!(
                "|W| = {:.3e} at boundary node x = ({}), p = ({}) exceeds {:.1e} of the peak",
                v.abs(),
                xs.join(", "),
                ps.join(", "),
                tol
            )));
        }
    }
    Ok(())
}
