//! Independent reference computations used to certify the fast paths.
//!
//! Nothing here shares numerical kernels with the production modules: the
//! quadrature is Clenshaw-Curtis rather than Gauss-Kronrod, diagrams are
//! evaluated in position space rather than in the mixed representation,
//! and the environment weights are written out afresh.

pub mod cc;
mod certify;
mod diagram;
pub mod gaussian;
mod propagator;
mod transform;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::PhaseSpaceGrid;

use cc::Estimate;

pub use certify::{certify, CertificationInstance, CertificationReport, ProbeComparison, TermReport, CERTIFY_REL_TOL};
pub use diagram::{oracle_diagram, DiagramId, OracleOptions};
pub use propagator::{
    bessel_k0, epsilon_extrapolated_propagator, free_kernel_quadrature, frequency_integral, wynn,
    ExtrapolatedPropagator, EXTRAPOLATION_TOL,
};
pub use transform::{oracle_wigner_transform, oracle_wigner_transform_grid};

pub const MIN_PROBES: usize = 3;
pub const MAX_PROBES: usize = 25;

/// Phase-space points at which an oracle is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSet {
    pub grid: PhaseSpaceGrid,
    pub points: Vec<(f64, f64)>,
}

impl ProbeSet {
    pub fn new(grid: PhaseSpaceGrid, points: Vec<(f64, f64)>) -> Result<Self> {
        let mut problems = Vec::new();
        if grid.dim() != 1 {
            problems.push(format!("probe sets are one-dimensional, grid has d = {}", grid.dim()));
        }
        if points.len() < MIN_PROBES || points.len() > MAX_PROBES {
            problems.push(format!(
                "probe count must lie in [{MIN_PROBES}, {MAX_PROBES}], got {}",
                points.len()
            ));
        }
        for &(x, p) in &points {
            if !(grid.contains_x(x) && grid.contains_p(p)) {
                problems.push(format!("probe ({x}, {p}) lies outside the grid box"));
            }
        }
        Error::collect(problems, Error::InvalidParams)?;
        Ok(ProbeSet { grid, points })
    }

    /// Every combination of the given coordinates.
    pub fn product(grid: PhaseSpaceGrid, xs: &[f64], ps: &[f64]) -> Result<Self> {
        let points = xs.iter().flat_map(|&x| ps.iter().map(move |&p| (x, p))).collect();
        ProbeSet::new(grid, points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeStatus {
    Converged,
    Unconverged,
    /// Not evaluated because the runtime budget ran out.
    Skipped,
}

/// One oracle value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeValue {
    pub x: f64,
    pub p: f64,
    /// Real and imaginary parts.
    pub value: (f64, f64),
    pub error: f64,
    pub evaluations: u64,
    pub status: ProbeStatus,
}

impl ProbeValue {
    pub(crate) fn from_estimate(x: f64, p: f64, e: Estimate) -> Self {
        ProbeValue {
            x,
            p,
            value: (e.value.re, e.value.im),
            error: e.error,
            evaluations: e.evaluations,
            status: if e.converged {
                ProbeStatus::Converged
            } else {
                ProbeStatus::Unconverged
            },
        }
    }

    pub(crate) fn skipped(x: f64, p: f64) -> Self {
        ProbeValue {
            x,
            p,
            value: (f64::NAN, f64::NAN),
            error: f64::INFINITY,
            evaluations: 0,
            status: ProbeStatus::Skipped,
        }
    }

    pub fn complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.value.0, self.value.1)
    }
}
