//! Diagram terms at probe points, computed in position space from the
//! closed-form initial wave function.
//!
//! Every term is a superposition of Gaussian packets that move freely and
//! receive momentum kicks `e^{±ikx}` at the vertex times. The `z` integral
//! of the Wigner transform is done in closed form, the vertex times and the
//! exchanged momentum numerically.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::InitialStateSpec;
use crate::propagators::{ModelParams, Regulator};

use super::cc::{integrate, CcTolerance, Estimate};
use super::gaussian::{initial_packets, pair_wigner, Packet};
use super::{ProbeSet, ProbeValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramId {
    Zeroth,
    Gain,
    LossLeft,
    LossRight,
}

impl DiagramId {
    pub const CORRECTIONS: [DiagramId; 3] = [DiagramId::Gain, DiagramId::LossLeft, DiagramId::LossRight];

    pub fn name(&self) -> &'static str {
        match self {
            DiagramId::Zeroth => "zeroth",
            DiagramId::Gain => "gain",
            DiagramId::LossLeft => "loss-left",
            DiagramId::LossRight => "loss-right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub rel_tol: f64,
    pub max_evals_per_probe: u64,
    /// Probes not started by this instant are reported as skipped.
    pub deadline: Option<Instant>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            rel_tol: 1e-9,
            max_evals_per_probe: 400_000_000,
            deadline: None,
        }
    }
}

/// Mode weights of the environment, written out independently of the
/// production code: `f(k)(1 + n)/(4πω)` and `f(k) n/(4πω)`.
struct Bath {
    m_e: f64,
    temperature: f64,
    cutoff: f64,
    smooth: bool,
}

impl Bath {
    fn new(p: &ModelParams) -> Self {
        Bath {
            m_e: p.m_e,
            temperature: p.temperature,
            cutoff: p.cutoff,
            smooth: p.regulator == Regulator::Smooth,
        }
    }

    fn omega(&self, k: f64) -> f64 {
        (k * k + self.m_e * self.m_e).sqrt()
    }

    fn cut(&self, k: f64) -> f64 {
        let a = k.abs() / self.cutoff;
        if !self.smooth {
            return if a <= 1.0 { 1.0 } else { 0.0 };
        }
        if a <= 0.5 {
            return 1.0;
        }
        if a >= 1.0 {
            return 0.0;
        }
        let u = 2.0 * a - 1.0;
        let bump = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
        bump(1.0 - u) / (bump(u) + bump(1.0 - u))
    }

    fn weights(&self, k: f64) -> (f64, f64, f64) {
        let w = self.omega(k);
        let n = if self.temperature > 0.0 {
            1.0 / ((w / self.temperature).exp() - 1.0)
        } else {
            0.0
        };
        let f = self.cut(k) / (4.0 * PI * w);
        (w, f * (1.0 + n), f * n)
    }

    fn breaks(&self) -> Vec<f64> {
        let h = 0.5 * self.cutoff;
        if self.smooth {
            vec![-h, 0.0, h]
        } else {
            vec![0.0]
        }
    }
}

struct Probe<'a> {
    x: f64,
    p: f64,
    t: f64,
    psi0: &'a [Packet],
    psi_t: Vec<Packet>,
    bath: &'a Bath,
    opts: &'a OracleOptions,
}

impl Probe<'_> {
    fn tol(&self, abs: f64) -> CcTolerance {
        CcTolerance {
            abs,
            rel: self.opts.rel_tol,
            max_evals: self.opts.max_evals_per_probe,
        }
    }

    fn pair(&self, a: &[Packet], b: &[Packet]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for u in a {
            for v in b {
                acc += pair_wigner(u, v, self.x, self.p);
            }
        }
        acc
    }

    fn floor(&self, measure: f64) -> f64 {
        1e-2 * self.opts.rel_tol * measure / PI
    }

    fn zeroth(&self) -> Estimate {
        let spread = self
            .psi_t
            .iter()
            .map(|q| (0.5 / q.alpha().re).sqrt() + (self.x - q.center().re).abs())
            .fold(0.0, f64::max);
        let reach = 2.0 * spread + 40.0 / (2.0 * self.psi_t[0].alpha().re).sqrt();
        let q = integrate(
            |z| {
                let a: Complex64 = self.psi_t.iter().map(|q| q.eval(self.x - z)).sum();
                let b: Complex64 = self.psi_t.iter().map(|q| q.eval(self.x + z)).sum();
                Estimate::exact(a * b.conj() * Complex64::from_polar(1.0 / PI, 2.0 * self.p * z))
            },
            -reach,
            reach,
            &[0.0],
            self.tol(1e-3 * self.opts.rel_tol / PI),
        );
        q
    }

    /// `ψ` kicked by `e^{−ikx}` at time `t1`, then carried to `t`.
    fn kicked_once(&self, k: f64, t1: f64) -> Vec<Packet> {
        self.psi0
            .iter()
            .map(|q| q.evolve(t1).kick(-k).evolve(self.t - t1))
            .collect()
    }

    fn gain(&self) -> Estimate {
        let t = self.t;
        let ks = self.bath.cutoff;
        integrate(
            |k| {
                let (w, cp, cm) = self.bath.weights(k);
                if cp == 0.0 && cm == 0.0 {
                    return Estimate::exact(Complex64::new(0.0, 0.0));
                }
                let c = cp + cm;
                integrate(
                    |t1| {
                        let phi1 = self.kicked_once(k, t1);
                        integrate(
                            |t2| {
                                let phi2 = self.kicked_once(k, t2);
                                let ph = Complex64::from_polar(1.0, w * (t1 - t2));
                                let weight = ph * cp + ph.conj() * cm;
                                Estimate::exact(self.pair(&phi1, &phi2) * weight)
                            },
                            0.0,
                            t,
                            &[t1],
                            self.tol(self.floor(t * c)),
                        )
                    },
                    0.0,
                    t,
                    &[],
                    self.tol(self.floor(t * t * c)),
                )
            },
            -ks,
            ks,
            &self.bath.breaks(),
            self.tol(self.floor(t * t / (2.0 * PI))),
        )
    }

    /// `ψ` kicked by `e^{−ikx}` at `t2` and by `e^{ikx}` at `t2 + s`.
    fn kicked_twice(&self, k: f64, s: f64, t2: f64) -> Vec<Packet> {
        self.psi0
            .iter()
            .map(|q| q.evolve(t2).kick(-k).evolve(s).kick(k).evolve(self.t - t2 - s))
            .collect()
    }

    fn loss(&self, left: bool) -> Estimate {
        let t = self.t;
        let ks = self.bath.cutoff;
        integrate(
            |k| {
                let (w, cp, cm) = self.bath.weights(k);
                if cp == 0.0 && cm == 0.0 {
                    return Estimate::exact(Complex64::new(0.0, 0.0));
                }
                let c = cp + cm;
                integrate(
                    |s| {
                        let ph = Complex64::from_polar(1.0, -w * s);
                        let weight = ph * cp + ph.conj() * cm;
                        integrate(
                            |t2| {
                                let phi = self.kicked_twice(k, s, t2);
                                let v = if left {
                                    self.pair(&phi, &self.psi_t) * weight
                                } else {
                                    self.pair(&self.psi_t, &phi) * weight.conj()
                                };
                                Estimate::exact(v)
                            },
                            0.0,
                            t - s,
                            &[],
                            self.tol(self.floor(t * c)),
                        )
                    },
                    0.0,
                    t,
                    &[],
                    self.tol(self.floor(t * t * c)),
                )
            },
            -ks,
            ks,
            &self.bath.breaks(),
            self.tol(self.floor(t * t / (2.0 * PI))),
        )
    }
}

/// Values of one term at every probe, per unit `g²` for the corrections.
///
/// Requires `d = 1`. The probes run in parallel; results are in probe
/// order and do not depend on the number of worker threads.
pub fn oracle_diagram(
    term: DiagramId,
    initial: &InitialStateSpec,
    params: &ModelParams,
    t: f64,
    probes: &ProbeSet,
    opts: &OracleOptions,
) -> Result<Vec<ProbeValue>> {
    params.validate()?;
    initial.validate()?;
    if params.d != 1 {
        return Err(Error::UnsupportedDimension {
            operation: "position-space diagram oracle",
            dim: params.d,
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParams(format!("evolution time must be non-negative, got {t}")));
    }
    if !(opts.rel_tol > 0.0) {
        return Err(Error::InvalidQuadrature(format!("rel_tol must be positive, got {}", opts.rel_tol)));
    }
    let psi0 = initial_packets(initial, params.m_s);
    let bath = Bath::new(params);
    Ok(probes
        .points
        .par_iter()
        .map(|&(x, p)| {
            if opts.deadline.is_some_and(|d| Instant::now() >= d) {
                return ProbeValue::skipped(x, p);
            }
            if t == 0.0 && term != DiagramId::Zeroth {
                return ProbeValue::from_estimate(x, p, Estimate::exact(Complex64::new(0.0, 0.0)));
            }
            let probe = Probe {
                x,
                p,
                t,
                psi0: &psi0,
                psi_t: psi0.iter().map(|q| q.evolve(t)).collect(),
                bath: &bath,
                opts,
            };
            let est = match term {
                DiagramId::Zeroth => probe.zeroth(),
                DiagramId::Gain => probe.gain(),
                DiagramId::LossLeft => probe.loss(true),
                DiagramId::LossRight => probe.loss(false),
            };
            ProbeValue::from_estimate(x, p, est)
        })
        .collect())
}
