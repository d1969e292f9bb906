//! Free propagation of the initial Wigner function plus the connected
//! order-g² corrections: the gain term and the two loss terms.

mod diagrams;
pub mod kernels;
mod zeroth;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{density_from_wigner, WignerFunction, MAX_EIGEN_NODES};
use crate::propagators::ModelParams;

pub use diagrams::{diagram_gain, diagram_loss_left, diagram_loss_right, DiagramTerm, QuadratureReport};
pub use zeroth::{evolve_zeroth, SHEAR_LEAK_TOL};

/// L¹ ratio of the correction to the zeroth order above which a result is
/// flagged as outside the perturbative regime.
pub const PERTURBATIVE_LIMIT: f64 = 0.3;

/// Time-integration rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeRule {
    /// Closed-form time integrals.
    Exact,
    GaussLegendre,
    Trapezoid,
}

/// Momentum-transfer integration rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentumRule {
    /// Globally adaptive Gauss-Kronrod, `⌈n_k/15⌉` starting panels.
    Adaptive,
    GaussLegendre,
    Trapezoid,
}

/// Discretization of the time and momentum-transfer integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Time nodes per axis for the fixed time rules.
    pub n_t: usize,
    /// Momentum nodes per segment for the fixed rules, or the starting
    /// resolution of the adaptive rule.
    pub n_k: usize,
    /// Momentum-transfer cutoff, at most Λ.
    pub k_max: f64,
    pub rel_tol: f64,
    pub time_rule: TimeRule,
    pub momentum_rule: MomentumRule,
}

impl QuadratureSpec {
    pub fn new(params: &ModelParams) -> Self {
        QuadratureSpec {
            n_t: 12,
            n_k: 24,
            k_max: params.cutoff,
            rel_tol: 1e-9,
            time_rule: TimeRule::Exact,
            momentum_rule: MomentumRule::Adaptive,
        }
    }

    /// Same spec with both node counts doubled.
    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            n_t: 2 * self.n_t,
            n_k: 2 * self.n_k,
            ..*self
        }
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        Error::collect(self.problems(params), Error::InvalidQuadrature)
    }

    pub(crate) fn problems(&self, params: &ModelParams) -> Vec<String> {
        let mut out = Vec::new();
        if self.n_t < 8 {
            out.push(format!("n_t must be at least 8, got {}", self.n_t));
        }
        if self.n_k < 16 {
            out.push(format!("n_k must be at least 16, got {}", self.n_k));
        }
        if !(self.k_max > 0.0 && self.k_max <= params.cutoff) {
            out.push(format!(
                "k_max must lie in (0, cutoff = {}], got {}",
                params.cutoff, self.k_max
            ));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            out.push(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        out
    }
}

/// Consistency checks of an evolution result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `∫dx dp (gain − loss_left − loss_right)` over all of phase space.
    pub trace_defect_g2: f64,
    /// Estimated quadrature error of `trace_defect_g2`.
    pub trace_defect_error: f64,
    /// `‖gain‖₁` on the grid.
    pub gain_l1: f64,
    /// The same trace summed over the grid nodes only.
    pub grid_trace_defect_g2: f64,
    /// Gain mass that lands outside the momentum window of the grid.
    pub gain_outside_grid: f64,
    /// Largest imaginary part of the assembled `W(t)`.
    pub max_imag_residue: f64,
    /// `max |loss_right − conj(loss_left)|`.
    pub hermiticity_defect: f64,
    /// `max |ρ(x, y) − conj ρ(y, x)| / max |ρ|` of the density matrix
    /// reconstructed from `W(t)`; absent on grids with more than
    /// [`MAX_EIGEN_NODES`] position nodes.
    pub rho_hermiticity_defect: Option<f64>,
    /// `g²‖correction‖₁ / ‖zeroth‖₁`.
    pub perturbative_ratio: f64,
    pub non_perturbative: bool,
    pub gain: QuadratureReport,
    pub loss_left: QuadratureReport,
    pub loss_right: QuadratureReport,
    pub trace_converged: bool,
}

impl Diagnostics {
    fn trivial(w: &WignerFunction) -> Self {
        let ok = QuadratureReport {
            converged: true,
            ..Default::default()
        };
        Diagnostics {
            trace_defect_g2: 0.0,
            trace_defect_error: 0.0,
            gain_l1: 0.0,
            grid_trace_defect_g2: 0.0,
            gain_outside_grid: 0.0,
            max_imag_residue: 0.0,
            hermiticity_defect: 0.0,
            rho_hermiticity_defect: rho_defect(w),
            perturbative_ratio: 0.0,
            non_perturbative: false,
            gain: ok.clone(),
            loss_left: ok.clone(),
            loss_right: ok,
            trace_converged: true,
        }
    }

    /// Whether every quadrature met its tolerance.
    pub fn quadrature_converged(&self) -> bool {
        self.gain.converged && self.loss_left.converged && self.loss_right.converged && self.trace_converged
    }
}

/// Wigner function at time `t` through order g², with its parts.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub w_total: WignerFunction,
    pub w_zeroth: WignerFunction,
    pub w_gain: DiagramTerm,
    pub w_loss_left: DiagramTerm,
    pub w_loss_right: DiagramTerm,
    pub diagnostics: Diagnostics,
}

impl EvolutionResult {
    /// Correction `gain − loss_left − loss_right` per node, real part.
    pub fn correction(&self) -> Vec<f64> {
        (0..self.w_gain.re.len())
            .map(|k| self.w_gain.re[k] - self.w_loss_left.re[k] - self.w_loss_right.re[k])
            .collect()
    }
}

fn rho_defect(w: &WignerFunction) -> Option<f64> {
    if w.grid.positions() > MAX_EIGEN_NODES {
        return None;
    }
    let rho = density_from_wigner(w);
    let peak = rho.max_abs();
    Some(if peak > 0.0 { rho.hermiticity_defect() / peak } else { 0.0 })
}

/// `W(t) = W_free(t) + g² (gain − loss_left − loss_right)`.
pub fn evolve(w0: &WignerFunction, params: &ModelParams, t: f64, quad: &QuadratureSpec) -> Result<EvolutionResult> {
    params.validate()?;
    quad.validate(params)?;
    let len = w0.values.len();
    if t == 0.0 {
        return Ok(EvolutionResult {
            w_total: w0.clone(),
            w_zeroth: w0.clone(),
            w_gain: DiagramTerm::zeros(len),
            w_loss_left: DiagramTerm::zeros(len),
            w_loss_right: DiagramTerm::zeros(len),
            diagnostics: Diagnostics::trivial(w0),
        });
    }
    let w_zeroth = evolve_zeroth(w0, params, t)?;
    if params.d != 1 {
        if params.g != 0.0 {
            return Err(Error::UnsupportedDimension {
                operation: "order-g² diagram evaluation",
                dim: params.d,
            });
        }
        return Ok(EvolutionResult {
            w_total: w_zeroth.clone(),
            w_gain: DiagramTerm::zeros(len),
            w_loss_left: DiagramTerm::zeros(len),
            diagnostics: Diagnostics::trivial(&w_zeroth),
            w_loss_right: DiagramTerm::zeros(len),
            w_zeroth,
        });
    }

    let ctx = diagrams::Context::new(w0, params, t, quad)?;
    let gain = ctx.gain();
    let table = ctx.self_energy_table();
    let ll = ctx.loss_left(&table);
    let lr = ctx.loss_right(&table);
    let gain_trace = ctx.gain_trace();
    let loss_trace = ctx.loss_trace();

    let g2 = params.g * params.g;
    let cell = w0.grid.cell();
    let mut total = Vec::with_capacity(len);
    let mut imag: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut corr_l1 = 0.0;
    let mut corr_sum = 0.0;
    let mut gain_l1 = 0.0;
    let mut gain_sum = 0.0;
    for k in 0..len {
        let c = gain.re[k] - ll.re[k] - lr.re[k];
        let ci = gain.im[k] - ll.im[k] - lr.im[k];
        total.push(w_zeroth.values[k] + g2 * c);
        imag = imag.max((g2 * ci).abs());
        herm = herm.max((lr.value(k) - ll.value(k).conj()).norm());
        corr_l1 += c.abs() * cell;
        corr_sum += c * cell;
        gain_l1 += gain.re[k].abs() * cell;
        gain_sum += gain.re[k] * cell;
    }
    let zeroth_l1 = w_zeroth.l1();
    let ratio = if zeroth_l1 > 0.0 { g2 * corr_l1 / zeroth_l1 } else { 0.0 };
    let w_total = WignerFunction::new(w0.grid, w_zeroth.t, total, w0.normalized)?;
    let diagnostics = Diagnostics {
        trace_defect_g2: (gain_trace.value - loss_trace.value).re,
        trace_defect_error: gain_trace.error + loss_trace.error,
        gain_l1,
        grid_trace_defect_g2: corr_sum,
        gain_outside_grid: gain_trace.value.re - gain_sum,
        max_imag_residue: imag,
        hermiticity_defect: herm,
        rho_hermiticity_defect: rho_defect(&w_total),
        perturbative_ratio: ratio,
        non_perturbative: ratio > PERTURBATIVE_LIMIT,
        gain: gain.report.clone(),
        loss_left: ll.report.clone(),
        loss_right: lr.report.clone(),
        trace_converged: gain_trace.converged && loss_trace.converged,
    };
    Ok(EvolutionResult {
        w_total,
        w_zeroth,
        w_gain: gain,
        w_loss_left: ll,
        w_loss_right: lr,
        diagnostics,
    })
}
