//! Fast path against oracle on a small instance, as a JSON-ready report.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{
    diagram_gain, diagram_loss_left, diagram_loss_right, evolve, Diagnostics, DiagramTerm, QuadratureSpec,
};
use crate::phase_space::{make_initial_wigner_tol, InitialStateSpec, PhaseSpaceGrid, WignerFunction};
use crate::propagators::ModelParams;

use super::diagram::{oracle_diagram, DiagramId, OracleOptions};
use super::{ProbeSet, ProbeStatus};

/// Required relative agreement between fast path and oracle.
pub const CERTIFY_REL_TOL: f64 = 1e-5;

/// A small one-dimensional problem and the probes at which it is checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationInstance {
    pub grid: PhaseSpaceGrid,
    pub initial: InitialStateSpec,
    pub params: ModelParams,
    pub t: f64,
    pub quad: QuadratureSpec,
    /// Boundary tolerance for sampling the initial state on the small grid.
    pub leak_tol: f64,
    pub probes: ProbeSet,
}

impl CertificationInstance {
    /// Gaussian of unit width on a 16-point grid, `m_S = m_E = t = 1`,
    /// `Λ = 50`, probed on the central 3×3 block of nodes.
    pub fn tiny() -> Self {
        let grid = PhaseSpaceGrid::centered(1, 16, 0.625).expect("valid grid");
        let params = ModelParams::new(1, 1.0, 1.0, 0.1, 50.0).expect("valid params");
        let mut quad = QuadratureSpec::new(&params);
        quad.n_t = 12;
        quad.n_k = 24;
        let xs = [grid.x(7), grid.x(8), grid.x(9)];
        let ps = [grid.p(7), grid.p(8), grid.p(9)];
        CertificationInstance {
            grid,
            initial: InitialStateSpec::gaussian(0.0, 0.0, 1.0),
            params,
            t: 1.0,
            quad,
            leak_tol: 1e-4,
            probes: ProbeSet::product(grid, &xs, &ps).expect("probes on the grid"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeComparison {
    pub x: f64,
    pub p: f64,
    pub fast: (f64, f64),
    /// Quadrature error plus the representation estimate.
    pub fast_error: f64,
    /// Largest change of the fast term over the grid when the outermost
    /// ring of the initial grid is zeroed, a proxy for the truncated tails.
    pub representation_error: f64,
    pub oracle: (f64, f64),
    pub oracle_error: f64,
    pub oracle_status: ProbeStatus,
    pub rel_diff: f64,
    /// Whether the difference is covered by the two error estimates.
    pub within_declared: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TermReport {
    pub term: DiagramId,
    pub probes: Vec<ProbeComparison>,
    pub max_rel_diff: f64,
    #[serde(skip)]
    pub oracle_seconds: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub instance: CertificationInstance,
    pub tolerance: f64,
    pub terms: Vec<TermReport>,
    pub fast_diagnostics: Diagnostics,
    #[serde(skip)]
    pub fast_seconds: f64,
    #[serde(skip)]
    pub total_seconds: f64,
    pub pass: bool,
}

fn node(grid: &PhaseSpaceGrid, x: f64, p: f64) -> Result<usize> {
    let n = grid.n_x();
    let i = ((x - grid.x_min()) / grid.dx()).round();
    let m = (p / grid.dp() + (n / 2) as f64).round();
    if i < 0.0 || m < 0.0 || i >= n as f64 || m >= n as f64 {
        return Err(Error::GridMismatch(format!("probe ({x}, {p}) is outside the grid")));
    }
    let (i, m) = (i as usize, m as usize);
    if (grid.x(i) - x).abs() > 1e-9 * grid.dx() || (grid.p(m) - p).abs() > 1e-9 * grid.dp() {
        return Err(Error::GridMismatch(format!("probe ({x}, {p}) is not a grid node")));
    }
    Ok(i * n + m)
}

fn strip_boundary(w: &WignerFunction) -> WignerFunction {
    let n = w.grid.n_x();
    let mut out = w.clone();
    for i in 0..n {
        for m in 0..n {
            if i == 0 || m == 0 || i == n - 1 || m == n - 1 {
                out.values[i * n + m] = 0.0;
            }
        }
    }
    out
}

/// Runs the fast path once and the oracle for each correction term, and
/// compares them probe by probe.
pub fn certify(instance: &CertificationInstance, opts: &OracleOptions) -> Result<CertificationReport> {
    let start = Instant::now();
    let w0 = make_initial_wigner_tol(&instance.initial, &instance.grid, instance.leak_tol)?;
    let result = evolve(&w0, &instance.params, instance.t, &instance.quad)?;
    let w_strip = strip_boundary(&w0);
    let fast_seconds = start.elapsed().as_secs_f64();
    let nodes = instance
        .probes
        .points
        .iter()
        .map(|&(x, p)| node(&instance.grid, x, p))
        .collect::<Result<Vec<_>>>()?;

    let mut terms = Vec::new();
    for term in DiagramId::CORRECTIONS {
        let (fast, alt): (&DiagramTerm, DiagramTerm) = match term {
            DiagramId::Gain => (&result.w_gain, diagram_gain(&w_strip, &instance.params, instance.t, &instance.quad)?),
            DiagramId::LossLeft => (
                &result.w_loss_left,
                diagram_loss_left(&w_strip, &instance.params, instance.t, &instance.quad)?,
            ),
            _ => (
                &result.w_loss_right,
                diagram_loss_right(&w_strip, &instance.params, instance.t, &instance.quad)?,
            ),
        };
        let rep = (0..fast.re.len())
            .map(|k| (fast.value(k) - alt.value(k)).norm())
            .fold(0.0, f64::max);
        let t0 = Instant::now();
        let oracle = oracle_diagram(term, &instance.initial, &instance.params, instance.t, &instance.probes, opts)?;
        let oracle_seconds = t0.elapsed().as_secs_f64();
        let probes: Vec<ProbeComparison> = oracle
            .iter()
            .zip(&nodes)
            .map(|(o, &k)| {
                let f = fast.value(k);
                let fast_error = fast.err[k] + rep;
                let ov = o.complex();
                let diff = (f - ov).norm();
                let rel_diff = if ov.norm() > 0.0 { diff / ov.norm() } else { diff };
                let ok = o.status == ProbeStatus::Converged;
                ProbeComparison {
                    x: o.x,
                    p: o.p,
                    fast: (f.re, f.im),
                    fast_error,
                    representation_error: rep,
                    oracle: o.value,
                    oracle_error: o.error,
                    oracle_status: o.status,
                    rel_diff,
                    within_declared: ok && diff <= fast_error + o.error,
                    pass: ok && rel_diff <= CERTIFY_REL_TOL && diff <= fast_error + o.error,
                }
            })
            .collect();
        let max_rel_diff = probes.iter().map(|c| c.rel_diff).fold(0.0, f64::max);
        let pass = probes.iter().all(|c| c.pass);
        terms.push(TermReport {
            term,
            probes,
            max_rel_diff,
            oracle_seconds,
            pass,
        });
    }
    let pass = terms.iter().all(|t| t.pass) && result.diagnostics.quadrature_converged();
    Ok(CertificationReport {
        instance: instance.clone(),
        tolerance: CERTIFY_REL_TOL,
        terms,
        fast_diagnostics: result.diagnostics,
        fast_seconds,
        total_seconds: start.elapsed().as_secs_f64(),
        pass,
    })
}
