//! Order-g² diagrams in the mixed representation
//! `χ(κ, p) = ∫dx e^{−iκx} W(x, p)`.
//!
//! Free evolution multiplies `χ` by `e^{−iκpt/m}`. Each vertex moves one
//! branch by a momentum `k`; the time integrals are the kernels `A` and
//! `B` of [`super::kernels`]. See `docs/momentum_reduction.md`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{CenteredDft, Sign};
use crate::phase_space::{PhaseSpaceGrid, WignerFunction};
use crate::propagators::ModelParams;
use crate::quadrature::{adaptive, fixed, FixedFamily, Quad, Tolerance};

use super::kernels::TimeKernels;
use super::zeroth::pad_factor;
use super::{MomentumRule, QuadratureSpec};

/// Quadrature bookkeeping for one diagram term.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    /// Largest propagated error estimate over the output nodes.
    pub max_abs_error: f64,
    pub evaluations: u64,
    pub integrals: usize,
    /// Integrals that stopped before meeting `rel_tol`.
    pub failures: usize,
    pub converged: bool,
    /// Largest boundary value of the input relative to its peak.
    pub representation_tail: f64,
    /// Zero-padding factor of the position box.
    pub pad_factor: usize,
}

impl QuadratureReport {
    fn absorb(&mut self, q: &Quad) {
        self.evaluations += q.evaluations as u64;
        self.integrals += 1;
        if !q.converged {
            self.failures += 1;
        }
    }

    /// Combines several reports; the error is the largest of them.
    pub fn merge<'a>(reports: impl IntoIterator<Item = &'a QuadratureReport>) -> QuadratureReport {
        let mut out = QuadratureReport {
            converged: true,
            ..Default::default()
        };
        for r in reports {
            out.max_abs_error = out.max_abs_error.max(r.max_abs_error);
            out.evaluations += r.evaluations;
            out.integrals += r.integrals;
            out.failures += r.failures;
            out.converged &= r.converged;
            out.representation_tail = out.representation_tail.max(r.representation_tail);
            out.pad_factor = out.pad_factor.max(r.pad_factor);
        }
        out
    }
}

/// One diagram contribution on the phase-space grid, coupling factored out.
///
/// `re` and `im` hold the real and imaginary parts. The gain term is real
/// up to rounding; the two loss terms are individually complex and only
/// their sum is real. `err` is the propagated error estimate per node.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramTerm {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub err: Vec<f64>,
    pub report: QuadratureReport,
}

impl DiagramTerm {
    pub fn zeros(len: usize) -> Self {
        DiagramTerm {
            re: vec![0.0; len],
            im: vec![0.0; len],
            err: vec![0.0; len],
            report: QuadratureReport {
                converged: true,
                ..Default::default()
            },
        }
    }

    pub fn value(&self, k: usize) -> Complex64 {
        Complex64::new(self.re[k], self.im[k])
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.im.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Shared precomputation for the three diagrams at one time.
pub(crate) struct Context {
    params: ModelParams,
    quad: QuadratureSpec,
    grid: PhaseSpaceGrid,
    t: f64,
    n: usize,
    pad: usize,
    n_pad: usize,
    l_pad: f64,
    kc: f64,
    p_wall: f64,
    /// `F(l, J) = Σ_i dx e^{−iκ_l x_i} ρ(x_i − z_J, x_i + z_J)`, row-major in `l`.
    f_mat: Vec<Complex64>,
    time: TimeKernels,
    tail: f64,
    /// Absolute accuracy floor for inner integrals whose value is far
    /// below the scale of the result.
    floor: f64,
}

impl Context {
    pub fn new(w0: &WignerFunction, params: &ModelParams, t: f64, quad: &QuadratureSpec) -> Result<Self> {
        params.validate()?;
        quad.validate(params)?;
        if params.d != 1 || w0.grid.dim() != 1 {
            return Err(Error::UnsupportedDimension {
                operation: "order-g² diagram evaluation",
                dim: w0.grid.dim().max(params.d),
            });
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParams(format!("evolution time must be non-negative, got {t}")));
        }
        let grid = w0.grid;
        let n = grid.n_x();
        let dx = grid.dx();
        let dp = grid.dp();
        let p_wall = 0.5 * n as f64 * dp;
        let pad = pad_factor(n, dx, p_wall * t / params.m_s);
        let n_pad = n * pad;
        let l_pad = n_pad as f64 * dx;

        // Off-diagonal samples f(i, J) = ρ(x_i − z_J, x_i + z_J).
        let dft = CenteredDft::new(n);
        let mut scratch = dft.scratch();
        let mut f = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &mut f[i * n..(i + 1) * n];
            for (m, v) in row.iter_mut().enumerate() {
                *v = Complex64::new(w0.values[i * n + m] * dp, 0.0);
            }
            dft.apply(row, Sign::Minus, &mut scratch);
            row[0] = Complex64::new(0.0, 0.0);
        }
        let mut f_mat = vec![Complex64::new(0.0, 0.0); n_pad * n];
        for l in 1..n_pad {
            let kappa = kappa_of(l, n_pad, l_pad);
            for i in 0..n {
                let ph = Complex64::from_polar(dx, -kappa * grid.x(i));
                for j in 0..n {
                    f_mat[l * n + j] += ph * f[i * n + j];
                }
            }
        }
        let mut ctx = Context {
            params: *params,
            quad: *quad,
            grid,
            t,
            n,
            pad,
            n_pad,
            l_pad,
            kc: quad.k_max.min(params.cutoff),
            p_wall,
            f_mat,
            time: TimeKernels::new(quad.time_rule, quad.n_t, t),
            tail: w0.boundary_tail(),
            floor: 0.0,
        };
        let l0 = n_pad / 2;
        let scale = (0..n).map(|m| ctx.chi0(l0, grid.p(m)).norm()).fold(0.0, f64::max);
        ctx.floor = 1e-3 * quad.rel_tol * scale * t * t;
        Ok(ctx)
    }

    fn kappa(&self, l: usize) -> f64 {
        kappa_of(l, self.n_pad, self.l_pad)
    }

    /// `χ₀(κ_l, P)` by band-limited interpolation in `P`.
    fn chi0(&self, l: usize, p: f64) -> Complex64 {
        let n = self.n;
        let dx = self.grid.dx();
        let row = &self.f_mat[l * n..(l + 1) * n];
        let step = Complex64::from_polar(1.0, 2.0 * p * dx);
        let mut ph = Complex64::from_polar(1.0, 2.0 * p * self.grid.z(1));
        let mut acc = Complex64::new(0.0, 0.0);
        for v in &row[1..] {
            acc += v * ph;
            ph *= step;
        }
        acc * (dx / PI)
    }

    fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F, a: f64, b: f64, breaks: &[f64]) -> Quad {
        if !(b > a) {
            return Quad::zero();
        }
        match self.quad.momentum_rule {
            MomentumRule::Adaptive => adaptive(
                f,
                a,
                b,
                breaks,
                self.quad.n_k.div_ceil(15),
                Tolerance {
                    abs: self.floor,
                    rel: self.quad.rel_tol,
                    max_evals: 400_000,
                },
            ),
            MomentumRule::GaussLegendre | MomentumRule::Trapezoid => {
                let family = if self.quad.momentum_rule == MomentumRule::GaussLegendre {
                    FixedFamily::GaussLegendre
                } else {
                    FixedFamily::Trapezoid
                };
                let mut cuts = vec![a];
                cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
                cuts.push(b);
                cuts.sort_by(f64::total_cmp);
                let mut out = Quad::zero();
                for w in cuts.windows(2) {
                    let q = fixed(&mut f, w[0], w[1], family, self.quad.n_k);
                    out.value += q.value;
                    out.error += q.error;
                    out.evaluations += q.evaluations;
                }
                out
            }
        }
    }

    /// Momentum breakpoints of the regulator shifted to the variable `k + shift`.
    fn breaks(&self, shift: f64) -> Vec<f64> {
        let mut b: Vec<f64> = self.params.regulator_breaks().iter().map(|k| k + shift).collect();
        b.push(shift);
        b
    }

    /// Gain kernel at output momentum `p` and input momentum `P = p + k`
    /// for transfer `κ`, without `χ₀`.
    fn gain_weight(&self, kappa: f64, p: f64, big_p: f64) -> Complex64 {
        let k = big_p - p;
        let (cp, cm) = self.params.mode_weights(k);
        if cp == 0.0 && cm == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.params.m_s;
        let w = self.params.omega(k);
        let q1 = p + 0.5 * kappa;
        let q2 = p - 0.5 * kappa;
        let d1 = -k * (2.0 * q1 + k) / (2.0 * m);
        let d2 = -k * (2.0 * q2 + k) / (2.0 * m);
        let mut acc = Complex64::new(0.0, 0.0);
        for (sigma, c) in [(1.0, cp), (-1.0, cm)] {
            if c != 0.0 {
                acc += self.time.a(sigma * w + d1) * self.time.a(sigma * w + d2).conj() * c;
            }
        }
        acc
    }

    fn gain_mode(&self, l: usize, m: usize) -> Quad {
        if l == 0 {
            return Quad::zero();
        }
        let kappa = self.kappa(l);
        let p = self.grid.p(m);
        let lo = (-self.p_wall).max(p - self.kc);
        let hi = self.p_wall.min(p + self.kc);
        let mut q = self.integrate(
            |big_p| self.gain_weight(kappa, p, big_p) * self.chi0(l, big_p),
            lo,
            hi,
            &self.breaks(p),
        );
        q.value *= Complex64::from_polar(1.0, -kappa * p * self.t / self.params.m_s);
        q
    }

    /// Loss self-energy `Σ(q) = ∫dk Σ_σ c_σ(k) B(σω_k + E_{q−k} − E_q)`.
    fn self_energy(&self, q: f64) -> Quad {
        let m = self.params.m_s;
        self.integrate(
            |k| {
                let (cp, cm) = self.params.mode_weights(k);
                let w = self.params.omega(k);
                let d = k * (k - 2.0 * q) / (2.0 * m);
                self.time.b(w + d) * cp + self.time.b(-w + d) * cm
            },
            -self.kc,
            self.kc,
            &self.breaks(0.0),
        )
    }

    fn modes(&self) -> Vec<(usize, usize)> {
        (0..self.n_pad)
            .flat_map(|l| (0..self.n).map(move |m| (l, m)))
            .collect()
    }

    fn synthesize(&self, chi: &[Quad], mut report: QuadratureReport) -> DiagramTerm {
        let n = self.n;
        let mut re = vec![0.0; n * n];
        let mut im = vec![0.0; n * n];
        let mut err = vec![0.0; n * n];
        let mut col_err = vec![0.0; n];
        for l in 1..self.n_pad {
            for m in 0..n {
                col_err[m] += chi[l * n + m].error / self.l_pad;
            }
        }
        for i in 0..n {
            let x = self.grid.x(i);
            for l in 1..self.n_pad {
                let ph = Complex64::from_polar(1.0 / self.l_pad, self.kappa(l) * x);
                for m in 0..n {
                    let v = ph * chi[l * n + m].value;
                    re[i * n + m] += v.re;
                    im[i * n + m] += v.im;
                }
            }
            err[i * n..(i + 1) * n].copy_from_slice(&col_err);
        }
        for q in chi {
            report.absorb(q);
        }
        report.max_abs_error = col_err.iter().fold(0.0, |a, &b| a.max(b));
        report.converged = report.failures == 0;
        report.representation_tail = self.tail;
        report.pad_factor = self.pad;
        DiagramTerm { re, im, err, report }
    }

    pub fn gain(&self) -> DiagramTerm {
        let chi: Vec<Quad> = self
            .modes()
            .into_par_iter()
            .map(|(l, m)| self.gain_mode(l, m))
            .collect();
        self.synthesize(&chi, QuadratureReport::default())
    }

    /// `Σ(u·dp/pad)` for `u ∈ [−n_pad, n_pad]`, indexed by `u + n_pad`.
    pub fn self_energy_table(&self) -> Vec<Quad> {
        let step = self.grid.dp() / self.pad as f64;
        let np = self.n_pad as i64;
        (-np..=np)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|u| self.self_energy(u as f64 * step))
            .collect()
    }

    fn loss(&self, table: &[Quad], left: bool) -> DiagramTerm {
        let n = self.n;
        let half = (self.n_pad / 2) as i64;
        let np = self.n_pad as i64;
        let chi: Vec<Quad> = self
            .modes()
            .into_par_iter()
            .map(|(l, m)| {
                if l == 0 {
                    return Quad::zero();
                }
                let big_l = l as i64 - half;
                let big_m = m as i64 - (n / 2) as i64;
                let p = self.grid.p(m);
                let kappa = self.kappa(l);
                let chi0 = self.chi0(l, p)
                    * Complex64::from_polar(1.0, -kappa * p * self.t / self.params.m_s);
                let (u, conj) = if left {
                    (big_m * self.pad as i64 + big_l, false)
                } else {
                    (big_m * self.pad as i64 - big_l, true)
                };
                let s = &table[(u + np) as usize];
                let sigma = if conj { s.value.conj() } else { s.value };
                Quad {
                    value: sigma * chi0,
                    error: s.error * chi0.norm(),
                    evaluations: 0,
                    converged: true,
                }
            })
            .collect();
        let mut report = QuadratureReport::default();
        // The table integrals are shared; count each once per term.
        for s in table {
            report.absorb(s);
        }
        let mut term = self.synthesize(&chi, report);
        term.report.integrals -= chi.len();
        term
    }

    pub fn loss_left(&self, table: &[Quad]) -> DiagramTerm {
        self.loss(table, true)
    }

    pub fn loss_right(&self, table: &[Quad]) -> DiagramTerm {
        self.loss(table, false)
    }

    fn outer_tol(&self) -> Tolerance {
        Tolerance {
            abs: 0.0,
            rel: self.quad.rel_tol.max(1e-12),
            max_evals: 20_000,
        }
    }

    /// `∫dx dp` of the gain term over all of phase space.
    pub fn gain_trace(&self) -> Quad {
        let l0 = self.n_pad / 2;
        let reach = self.p_wall + self.kc;
        let mut inner_err = 0.0;
        let mut inner_evals = 0;
        let mut inner_fail = false;
        let mut breaks = vec![-self.p_wall, self.p_wall, 0.0];
        for b in self.params.regulator_breaks() {
            breaks.push(self.p_wall + b);
            breaks.push(-self.p_wall + b);
        }
        let mut q = adaptive(
            |p| {
                let lo = (-self.p_wall).max(p - self.kc);
                let hi = self.p_wall.min(p + self.kc);
                let qi = self.integrate(
                    |big_p| self.gain_weight(0.0, p, big_p) * self.chi0(l0, big_p),
                    lo,
                    hi,
                    &self.breaks(p),
                );
                inner_err += qi.error;
                inner_evals += qi.evaluations;
                inner_fail |= !qi.converged;
                qi.value
            },
            -reach,
            reach,
            &breaks,
            4,
            self.outer_tol(),
        );
        q.error += inner_err * (2.0 * reach) / q.evaluations.max(1) as f64;
        q.evaluations += inner_evals;
        q.converged &= !inner_fail;
        q
    }

    /// `∫dx dp` of the two loss terms together.
    pub fn loss_trace(&self) -> Quad {
        let l0 = self.n_pad / 2;
        let mut inner_err = 0.0;
        let mut inner_evals = 0;
        let mut inner_fail = false;
        let mut q = adaptive(
            |big_p| {
                let s = self.self_energy(big_p);
                let c = self.chi0(l0, big_p);
                inner_err += s.error * c.norm();
                inner_evals += s.evaluations;
                inner_fail |= !s.converged;
                c * (2.0 * s.value.re)
            },
            -self.p_wall,
            self.p_wall,
            &[0.0],
            4,
            self.outer_tol(),
        );
        q.error += 2.0 * inner_err * (2.0 * self.p_wall) / q.evaluations.max(1) as f64;
        q.evaluations += inner_evals;
        q.converged &= !inner_fail;
        q
    }
}

fn kappa_of(l: usize, n_pad: usize, l_pad: f64) -> f64 {
    2.0 * PI * (l as f64 - (n_pad / 2) as f64) / l_pad
}

/// Gain diagram: one vertex on each branch, joined by the Wightman function.
pub fn diagram_gain(w0: &WignerFunction, params: &ModelParams, t: f64, quad: &QuadratureSpec) -> Result<DiagramTerm> {
    if t == 0.0 {
        return Ok(DiagramTerm::zeros(w0.values.len()));
    }
    Ok(Context::new(w0, params, t, quad)?.gain())
}

/// Loss diagram with both vertices time-ordered on the ket branch.
pub fn diagram_loss_left(w0: &WignerFunction, params: &ModelParams, t: f64, quad: &QuadratureSpec) -> Result<DiagramTerm> {
    if t == 0.0 {
        return Ok(DiagramTerm::zeros(w0.values.len()));
    }
    let ctx = Context::new(w0, params, t, quad)?;
    let table = ctx.self_energy_table();
    Ok(ctx.loss_left(&table))
}

/// Loss diagram with both vertices anti-time-ordered on the bra branch.
pub fn diagram_loss_right(w0: &WignerFunction, params: &ModelParams, t: f64, quad: &QuadratureSpec) -> Result<DiagramTerm> {
    if t == 0.0 {
        return Ok(DiagramTerm::zeros(w0.values.len()));
    }
    let ctx = Context::new(w0, params, t, quad)?;
    let table = ctx.self_energy_table();
    Ok(ctx.loss_right(&table))
}
