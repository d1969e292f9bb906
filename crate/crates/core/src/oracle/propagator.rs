//! Reference values for the propagators: the system propagator from an
//! explicit `iε` frequency integral extrapolated to `ε → 0`, and the
//! Bessel function `K₀` from its integral representation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::propagators::{ModelParams, SpacetimePoint};

use super::cc::{integrate_real, CcTolerance, Estimate};

/// Residual above which an extrapolation is flagged.
pub const EXTRAPOLATION_TOL: f64 = 1e-7;

const HALF_PERIODS: usize = 60;

fn tight() -> CcTolerance {
    CcTolerance {
        abs: 0.0,
        rel: 1e-13,
        max_evals: 2_000_000,
    }
}

/// Wynn's epsilon algorithm on a sequence of partial sums; returns the
/// last accelerated estimate and the change from the one before.
pub fn wynn(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = (partial[n - 1], (partial[n - 1] - partial[n.saturating_sub(2)]).abs());
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let v = if d == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
            next.push(v);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 && cur.len() >= 2 && cur.iter().all(|v| v.is_finite()) {
            let m = cur.len();
            best = (cur[m - 1], (cur[m - 1] - cur[m - 2]).abs());
        }
    }
    best
}

/// `∫₀^∞ g(ν) dν` for a slowly decaying integrand oscillating with
/// angular frequency `w`, by half-period partial sums and Wynn's
/// acceleration. `head` is the initial stretch, integrated with `breaks`.
fn oscillatory_tail<G: Fn(f64) -> f64>(g: G, w: f64, head: f64, breaks: &[f64]) -> (f64, f64) {
    let first = integrate_real(&g, 0.0, head, breaks, tight());
    let half = PI / w;
    let mut sum = first.value.re;
    let mut err = first.error;
    let mut partial = Vec::with_capacity(HALF_PERIODS);
    for j in 0..HALF_PERIODS {
        let a = head + j as f64 * half;
        let q = integrate_real(&g, a, a + half, &[], tight());
        sum += q.value.re;
        err += q.error;
        partial.push(sum);
    }
    let (v, change) = wynn(&partial);
    (v, change + err)
}

/// `∫dν e^{−iνΔt}/(ν + iε)` computed along the real axis.
pub fn frequency_integral(dt: f64, eps: f64) -> (Complex64, f64) {
    let w = dt.abs();
    let head = 2.0 * PI / w;
    let mut breaks = Vec::new();
    let mut b = eps;
    while b < head {
        breaks.push(b);
        b *= 4.0;
    }
    let (c, ec) = oscillatory_tail(|v| (v * dt).cos() / (v * v + eps * eps), w, head, &breaks);
    let (s, es) = oscillatory_tail(|v| v * (v * dt).sin() / (v * v + eps * eps), w, head, &breaks);
    (Complex64::new(0.0, -2.0 * (eps * c + s)), 2.0 * (eps * ec + es))
}

/// `∫dk/(2π) e^{ikΔx − ik²Δt/(2m)}` along the steepest-descent line
/// through the stationary point.
pub fn momentum_integral(dt: f64, dx: f64, m: f64) -> (Complex64, f64) {
    let width = (2.0 * m / dt.abs()).sqrt();
    let reach = 9.0 * width;
    let q = integrate_real(|s| (-dt.abs() * s * s / (2.0 * m)).exp(), -reach, reach, &[0.0], tight());
    let rot = Complex64::from_polar(1.0, -dt.signum() * PI / 4.0);
    let phase = Complex64::from_polar(1.0 / (2.0 * PI), m * dx * dx / (2.0 * dt));
    (q.value * rot * phase, q.error / (2.0 * PI))
}

/// Free kernel `⟨x|e^{−iHΔt}|y⟩` by momentum quadrature, any sign of `Δt`.
pub fn free_kernel_quadrature(dt: f64, dx: &[f64], m: f64) -> Result<Complex64> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(Error::EqualTime);
    }
    Ok(dx.iter().map(|&d| momentum_integral(dt, d, m).0).product())
}

/// Feynman propagator at finite `ε` for every `ε` in the list, and the
/// polynomial extrapolation to `ε = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct ExtrapolatedPropagator {
    pub eps: Vec<f64>,
    pub samples: Vec<(f64, f64)>,
    pub value: (f64, f64),
    /// Change of the extrapolated value when the largest `ε` is dropped.
    pub residual: f64,
    /// Quadrature error bound on each sample.
    pub sample_error: f64,
    pub flagged: bool,
}

impl ExtrapolatedPropagator {
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value.0, self.value.1)
    }
}

fn neville(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (p[i] * xs[i + k] - p[i + 1] * xs[i]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

/// `G^F(a; b)` from `∫d^dk/(2π)^d ∫dω/(2π) i e^{−iωΔt + ik·Δx}/(ω − k²/(2m) + iε)`,
/// extrapolated to `ε → 0` through the supplied `ε` values.
pub fn epsilon_extrapolated_propagator(
    a: &SpacetimePoint,
    b: &SpacetimePoint,
    params: &ModelParams,
    eps_list: &[f64],
) -> Result<ExtrapolatedPropagator> {
    params.validate()?;
    if a.x.len() != params.d || b.x.len() != params.d {
        return Err(Error::InvalidParams(format!(
            "points must have {} components, got {} and {}",
            params.d,
            a.x.len(),
            b.x.len()
        )));
    }
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidParams("eps_list must hold positive finite values".to_string()));
    }
    let dt = a.t - b.t;
    if dt == 0.0 {
        return Err(Error::EqualTime);
    }
    let mut f = Complex64::new(1.0, 0.0);
    let mut f_err = 0.0;
    for (xa, xb) in a.x.iter().zip(&b.x) {
        let (v, e) = momentum_integral(dt, xa - xb, params.m_s);
        f_err = f_err * v.norm() + e * f.norm();
        f *= v;
    }
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(|x, y| y.total_cmp(x));
    let mut samples = Vec::with_capacity(eps.len());
    let mut sample_error: f64 = 0.0;
    for &e in &eps {
        let (j, j_err) = frequency_integral(dt, e);
        let g = -j * f / Complex64::new(0.0, 2.0 * PI);
        sample_error = sample_error.max((j_err * f.norm() + j.norm() * f_err) / (2.0 * PI));
        samples.push(g);
    }
    let value = neville(&eps, &samples);
    let residual = if eps.len() > 1 {
        (value - neville(&eps[1..], &samples[1..])).norm()
    } else {
        f64::INFINITY
    };
    let scale = value.norm().max(f.norm());
    Ok(ExtrapolatedPropagator {
        samples: samples.iter().map(|g| (g.re, g.im)).collect(),
        eps,
        value: (value.re, value.im),
        residual,
        sample_error,
        flagged: residual > EXTRAPOLATION_TOL * scale || sample_error > EXTRAPOLATION_TOL * scale,
    })
}

/// Modified Bessel function `K₀(r) = ∫₀^∞ e^{−r cosh u} du`, `r > 0`.
pub fn bessel_k0(r: f64) -> Estimate {
    let top = (745.0 / r).max(1.0 + 1e-12).acosh();
    integrate_real(|u| (-r * u.cosh()).exp(), 0.0, top, &[], tight())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_reference_values() {
        // Abramowitz & Stegun table 9.8
        for (r, k0) in [(0.5, 0.924_419_071_2), (1.0, 0.421_024_438_2), (2.0, 0.113_893_872_7)] {
            let q = bessel_k0(r);
            assert!((q.value.re - k0).abs() < 1e-9, "{r} {}", q.value.re);
        }
    }

    #[test]
    fn frequency_integral_picks_the_pole() {
        for dt in [0.3, 1.0, 2.5] {
            for eps in [1e-2, 1e-3] {
                let (j, _) = frequency_integral(dt, eps);
                let want = Complex64::new(0.0, -2.0 * PI * (-eps * dt).exp());
                assert!((j - want).norm() < 1e-8, "{dt} {eps} {j}");
                let (j, _) = frequency_integral(-dt, eps);
                assert!(j.norm() < 1e-8, "{j}");
            }
        }
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        let mut s = 0.0;
        let partial: Vec<f64> = (0..20)
            .map(|k| {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64;
                s
            })
            .collect();
        let (v, _) = wynn(&partial);
        assert!((v - PI / 4.0).abs() < 1e-12);
    }
}
