//! System and environment two-point functions.
//!
//! The particle propagators are closed forms of the free Schrödinger
//! kernel. The scalar-field functions are spectral integrals over
//! `|k| ≤ Λ` evaluated by adaptive quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{for_each_lane, signed_bin};
use crate::phase_space::PhaseSpaceGrid;
use crate::quadrature::{adaptive, Quad, Tolerance};

/// Shape of the UV cutoff applied to environment momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regulator {
    /// Step function at `|k| = Λ`.
    Sharp,
    /// Unity up to `Λ/2`, then a C∞ roll-off reaching zero at `Λ`.
    Smooth,
}

/// Physical constants of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Spatial dimension, 1 or 3.
    pub d: usize,
    /// Particle mass.
    pub m_s: f64,
    /// Scalar-field mass.
    pub m_e: f64,
    /// Yukawa coupling.
    pub g: f64,
    /// Environment temperature; zero selects the vacuum.
    pub temperature: f64,
    /// UV momentum cutoff Λ.
    pub cutoff: f64,
    pub regulator: Regulator,
}

impl ModelParams {
    /// Vacuum environment with the smooth regulator.
    pub fn new(d: usize, m_s: f64, m_e: f64, g: f64, cutoff: f64) -> Result<Self> {
        let p = ModelParams {
            d,
            m_s,
            m_e,
            g,
            temperature: 0.0,
            cutoff,
            regulator: Regulator::Smooth,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_temperature(mut self, temperature: f64) -> Result<Self> {
        self.temperature = temperature;
        self.validate()?;
        Ok(self)
    }

    pub fn with_regulator(mut self, regulator: Regulator) -> Self {
        self.regulator = regulator;
        self
    }

    pub fn with_coupling(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn validate(&self) -> Result<()> {
        Error::collect(self.problems(), Error::InvalidParams)
    }

    pub(crate) fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.d != 1 && self.d != 3 {
            out.push(format!("dimension must be 1 or 3, got {}", self.d));
        }
        if !(self.m_s.is_finite() && self.m_s > 0.0) {
            out.push(format!("m_s must be positive and finite, got {}", self.m_s));
        }
        if !(self.m_e.is_finite() && self.m_e > 0.0) {
            out.push(format!("m_e must be positive and finite, got {}", self.m_e));
        }
        if !self.g.is_finite() {
            out.push(format!("g must be finite, got {}", self.g));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            out.push(format!("temperature must be finite and non-negative, got {}", self.temperature));
        }
        if !self.cutoff.is_finite() {
            out.push(format!("cutoff must be finite (the coincident-point limit diverges), got {}", self.cutoff));
        } else if !(self.cutoff > self.m_e) {
            out.push(format!("cutoff must exceed m_e, got {} <= {}", self.cutoff, self.m_e));
        }
        out
    }

    pub fn omega(&self, k: f64) -> f64 {
        (k * k + self.m_e * self.m_e).sqrt()
    }

    /// Bose-Einstein occupation of a mode with energy `omega`.
    pub fn occupation(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            0.0
        } else {
            1.0 / (omega / self.temperature).exp_m1()
        }
    }

    /// Cutoff profile `f(|k|)`.
    pub fn regulator_weight(&self, k: f64) -> f64 {
        let k = k.abs();
        let lam = self.cutoff;
        match self.regulator {
            Regulator::Sharp => {
                if k <= lam {
                    1.0
                } else {
                    0.0
                }
            }
            Regulator::Smooth => {
                if k <= 0.5 * lam {
                    1.0
                } else if k >= lam {
                    0.0
                } else {
                    1.0 - smooth_step((k - 0.5 * lam) / (0.5 * lam))
                }
            }
        }
    }

    /// Points where the regulator is not analytic.
    pub fn regulator_breaks(&self) -> Vec<f64> {
        match self.regulator {
            Regulator::Sharp => vec![],
            Regulator::Smooth => vec![-0.5 * self.cutoff, 0.5 * self.cutoff],
        }
    }

    /// One-dimensional mode weights `(c₊, c₋)` multiplying `e^{∓iωτ}` in
    /// the Wightman function: `f(k)(1 + n)/(2π·2ω)` and `f(k) n/(2π·2ω)`.
    pub fn mode_weights(&self, k: f64) -> (f64, f64) {
        let w = self.omega(k);
        let base = self.regulator_weight(k) / (4.0 * PI * w);
        let n = self.occupation(w);
        (base * (1.0 + n), base * n)
    }
}

fn smooth_step(u: f64) -> f64 {
    let psi = |v: f64| if v <= 0.0 { 0.0 } else { (-1.0 / v).exp() };
    let a = psi(u);
    let b = psi(1.0 - u);
    a / (a + b)
}

/// A spacetime point `(t, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: Vec<f64>,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        SpacetimePoint { t, x }
    }

    pub fn at(t: f64, x: f64) -> Self {
        SpacetimePoint { t, x: vec![x] }
    }
}

fn separation(a: &SpacetimePoint, b: &SpacetimePoint, d: usize) -> Result<f64> {
    if a.x.len() != d || b.x.len() != d {
        return Err(Error::InvalidParams(format!(
            "spacetime points must have {d} spatial components"
        )));
    }
    let all = [a.t, b.t].into_iter().chain(a.x.iter().copied()).chain(b.x.iter().copied());
    if all.into_iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams("non-finite spacetime coordinate".to_string()));
    }
    Ok(a.x.iter().zip(&b.x).map(|(u, v)| (u - v) * (u - v)).sum())
}

/// Free Schrödinger kernel `(m/(2πi·dt))^{d/2} exp(i m r²/(2 dt))` for `dt > 0`.
pub fn free_kernel(dt: f64, r2: f64, m: f64, d: usize) -> Complex64 {
    let root = (Complex64::new(m, 0.0) / Complex64::new(0.0, 2.0 * PI * dt)).sqrt();
    root.powi(d as i32) * Complex64::from_polar(1.0, m * r2 / (2.0 * dt))
}

/// Time-ordered particle propagator `G^F(a; b)`.
///
/// Vanishes for `a.t < b.t`. Coincident times are rejected: the kernel is
/// a nascent delta there, available through [`propagate_free`].
pub fn sys_feynman(a: &SpacetimePoint, b: &SpacetimePoint, params: &ModelParams) -> Result<Complex64> {
    let r2 = separation(a, b, params.d)?;
    let dt = a.t - b.t;
    if dt == 0.0 {
        return Err(Error::EqualTime);
    }
    if dt < 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(free_kernel(dt, r2, params.m_s, params.d))
}

/// Anti-time-ordered particle propagator `G^D(a; b) = conj G^F(b; a)`.
pub fn sys_dyson(a: &SpacetimePoint, b: &SpacetimePoint, params: &ModelParams) -> Result<Complex64> {
    let r2 = separation(a, b, params.d)?;
    let dt = a.t - b.t;
    if dt == 0.0 {
        return Err(Error::EqualTime);
    }
    if dt > 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(free_kernel(-dt, r2, params.m_s, params.d).conj())
}

/// Kernel-integrated free propagation `∫ d^dz G^F(x, dt; z, 0) f(z)` of a
/// function sampled on the position nodes of `grid`, by spectral
/// multiplication on the periodic box. `dt → 0⁺` returns `f`.
pub fn propagate_free(f: &[Complex64], grid: &PhaseSpaceGrid, m: f64, dt: f64) -> Result<Vec<Complex64>> {
    if f.len() != grid.positions() {
        return Err(Error::GridMismatch(format!(
            "expected {} position samples, got {}",
            grid.positions(),
            f.len()
        )));
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParams(format!("propagation time must be non-negative, got {dt}")));
    }
    let n = grid.n_x();
    let d = grid.dim();
    let mut out = f.to_vec();
    if dt == 0.0 {
        return Ok(out);
    }
    let mut planner = rustfft::FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let dk = 2.0 * PI / grid.box_length();
    let phase: Vec<Complex64> = (0..n)
        .map(|k| {
            let q = signed_bin(k, n) as f64 * dk;
            Complex64::from_polar(1.0 / n as f64, -q * q * dt / (2.0 * m))
        })
        .collect();
    for axis in 0..d {
        for_each_lane(&mut out, n, d, axis, |lane, _| {
            fwd.process(lane);
            for (v, ph) in lane.iter_mut().zip(&phase) {
                *v *= ph;
            }
            inv.process(lane);
        });
    }
    Ok(out)
}

/// Wightman function `Δ^<_{ab} = ⟨φ(b) φ(a)⟩` with its quadrature report.
pub fn env_wightman_report(a: &SpacetimePoint, b: &SpacetimePoint, params: &ModelParams) -> Result<Quad> {
    params.validate()?;
    let r = separation(a, b, params.d)?.sqrt();
    let tau = b.t - a.t;
    let p = *params;
    let thermal = move |k: f64| {
        let w = p.omega(k);
        let n = p.occupation(w);
        let f = p.regulator_weight(k);
        let e = Complex64::from_polar(1.0, -w * tau);
        (e * (1.0 + n) + e.conj() * n) * (f / w)
    };
    let lam = params.cutoff;
    let cycles = lam * (r + tau.abs()) / (2.0 * PI);
    let panels = (cycles.ceil() as usize).clamp(4, 4096);
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-13,
        max_evals: 4_000_000,
    };
    let breaks = [0.5 * lam];
    let q = match params.d {
        1 => adaptive(
            |k| thermal(k) * ((k * r).cos() / (2.0 * PI)),
            0.0,
            lam,
            &breaks,
            panels,
            tol,
        ),
        _ => adaptive(
            |k| {
                let kr = k * r;
                let sinc = if kr.abs() < 1e-4 {
                    1.0 - kr * kr / 6.0
                } else {
                    kr.sin() / kr
                };
                thermal(k) * (k * k * sinc / (4.0 * PI * PI))
            },
            0.0,
            lam,
            &breaks,
            panels,
            tol,
        ),
    };
    Ok(q)
}

/// Wightman function `Δ^<_{ab} = ⟨φ(b) φ(a)⟩`.
pub fn env_wightman(a: &SpacetimePoint, b: &SpacetimePoint, params: &ModelParams) -> Result<Complex64> {
    let q = env_wightman_report(a, b, params)?;
    if !q.converged {
        return Err(Error::Quadrature(format!(
            "Wightman integral stalled at error {:.2e}",
            q.error
        )));
    }
    Ok(q.value)
}

fn ordered(a: &SpacetimePoint, b: &SpacetimePoint, params: &ModelParams) -> Result<(Complex64, Complex64)> {
    // ⟨φ(a)φ(b)⟩ and ⟨φ(b)φ(a)⟩.
    Ok((env_wightman(b, a, params)?, env_wightman(a, b, params)?))
}

/// Time-ordered field propagator. Equal times take the symmetric average.
pub fn env_feynman(a: &SpacetimePoint, b: &SpacetimePoint, params: &ModelParams) -> Result<Complex64> {
    let (ab, ba) = ordered(a, b, params)?;
    Ok(if a.t > b.t {
        ab
    } else if a.t < b.t {
        ba
    } else {
        0.5 * (ab + ba)
    })
}

/// Anti-time-ordered field propagator. Equal times take the symmetric average.
pub fn env_dyson(a: &SpacetimePoint, b: &SpacetimePoint, params: &ModelParams) -> Result<Complex64> {
    let (ab, ba) = ordered(a, b, params)?;
    Ok(if a.t > b.t {
        ba
    } else if a.t < b.t {
        ab
    } else {
        0.5 * (ab + ba)
    })
}
