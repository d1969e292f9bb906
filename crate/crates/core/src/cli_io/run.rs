//! Run orchestration and the manifest.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{evolve, Diagnostics, EvolutionResult};
use crate::oracle::{certify, CertificationInstance, OracleOptions, ProbeSet};
use crate::phase_space::{
    density_from_wigner, make_initial_density, make_initial_wigner, make_initial_wigner_tol, observables,
    wigner_from_density_report, Observables, WignerFunction,
};
use crate::propagators::ModelParams;

use super::config::{Mode, RunConfig};
use super::output::{emit, emit_json, ensure_dir, marginal_curves, plot_triplets, wigner_csv, FileRecord};

/// Largest imaginary residue of `W(t)`, relative to the peak of `W₀`.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;
/// Largest `|loss_right − conj loss_left|`, relative to the peak of `W₀`.
pub const HERMITICITY_TOL: f64 = 1e-8;
/// Largest relative anti-Hermitian part of the reconstructed `ρ(t)`.
pub const RHO_HERMITICITY_TOL: f64 = 1e-8;
/// Trace defect allowed per unit `‖gain‖₁`.
pub const TRACE_REL_TOL: f64 = 1e-4;
/// Relative deviation of a transformed pure state's purity from one.
pub const PURITY_TOL: f64 = 1e-6;

/// One tolerance check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            limit,
            pass: value <= limit,
        }
    }

    fn flag(name: &str, ok: bool) -> Self {
        Check {
            name: name.to_string(),
            value: if ok { 0.0 } else { 1.0 },
            limit: 0.0,
            pass: ok,
        }
    }
}

/// Everything recorded about one output time.
#[derive(Debug, Clone, Serialize)]
pub struct SliceRecord {
    pub t: f64,
    pub environment: String,
    pub cutoff: f64,
    pub observables: Observables,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub environment: String,
    pub started: String,
    pub finished: String,
    pub elapsed_seconds: f64,
    /// `ok` or `failed`.
    pub status: String,
    pub failure: Option<String>,
    /// Whether every check of every slice passed.
    pub checks_passed: bool,
    pub slices: Vec<SliceRecord>,
    pub files: Vec<FileRecord>,
}

impl RunManifest {
    /// True when the run completed and every check passed.
    pub fn success(&self) -> bool {
        self.status == "ok" && self.checks_passed
    }
}

/// Name of the manifest file in the output directory.
pub const MANIFEST: &str = "manifest.json";

pub fn environment_label(p: &ModelParams) -> String {
    if p.temperature > 0.0 {
        format!("thermal (T = {})", p.temperature)
    } else {
        "vacuum".to_string()
    }
}

fn evolution_checks(r: &EvolutionResult, peak: f64) -> Vec<Check> {
    let d = &r.diagnostics;
    let mut out = vec![
        Check::at_most("max_imag_residue", d.max_imag_residue / peak, IMAG_RESIDUE_TOL),
        Check::at_most("hermiticity_defect", d.hermiticity_defect / peak, HERMITICITY_TOL),
        Check::at_most(
            "trace_defect_g2",
            d.trace_defect_g2.abs(),
            (TRACE_REL_TOL * d.gain_l1).max(d.trace_defect_error),
        ),
        Check::flag("quadrature_converged", d.quadrature_converged()),
        Check::flag("perturbative", !d.non_perturbative),
    ];
    if let Some(h) = d.rho_hermiticity_defect {
        out.push(Check::at_most("rho_hermiticity_defect", h, RHO_HERMITICITY_TOL));
    }
    out
}

struct Session<'a> {
    cfg: &'a RunConfig,
    dir: &'a Path,
    files: Vec<FileRecord>,
    slices: Vec<SliceRecord>,
}

impl Session<'_> {
    fn slice(&self, t: f64, w: &WignerFunction, diagnostics: Option<Diagnostics>, checks: Vec<Check>) -> SliceRecord {
        SliceRecord {
            t,
            environment: environment_label(&self.cfg.model),
            cutoff: self.cfg.model.cutoff,
            observables: observables(w),
            diagnostics,
            checks,
        }
    }

    fn write_slice(&mut self, k: usize, w: &WignerFunction, record: SliceRecord, grids: bool) -> Result<()> {
        let stem = format!("W_t{k:03}");
        if grids && self.cfg.outputs.csv {
            self.files.push(emit(self.dir, &format!("{stem}.csv"), wigner_csv(w).as_bytes())?);
        }
        self.files.push(emit_json(self.dir, &format!("{stem}.json"), &record)?);
        if grids && self.cfg.outputs.plot {
            self.files.push(emit(self.dir, &format!("{stem}.dat"), plot_triplets(w).as_bytes())?);
        }
        if grids && self.cfg.outputs.marginals {
            self.files
                .push(emit(self.dir, &format!("{stem}_marginals.dat"), marginal_curves(w).as_bytes())?);
        }
        self.slices.push(record);
        Ok(())
    }

    fn transform(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let rho = make_initial_density(&cfg.initial, &cfg.grid)?;
        let (w, residue) = wigner_from_density_report(&rho, &cfg.grid)?;
        let closed = make_initial_wigner(&cfg.initial, &cfg.grid)?;
        let back = density_from_wigner(&w);
        let peak = rho.max_abs();
        let round_trip = back
            .values
            .iter()
            .zip(&rho.values)
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).norm()))
            / peak;
        let obs = observables(&w);
        let checks = vec![
            Check::at_most("imag_residue", residue, IMAG_RESIDUE_TOL),
            Check::at_most("closed_form_sup_distance", w.sup_distance(&closed) / closed.max_abs(), 1e-8),
            Check::at_most("round_trip", round_trip, 1e-10),
            Check::at_most("purity_deviation", (obs.purity - 1.0).abs(), PURITY_TOL),
        ];
        let record = self.slice(0.0, &w, None, checks);
        self.write_slice(0, &w, record, true)
    }

    fn evolve_all(&mut self, grids: bool) -> Result<()> {
        let cfg = self.cfg;
        let w0 = make_initial_wigner_tol(&cfg.initial, &cfg.grid, cfg.leak_tol)?;
        let peak = w0.max_abs();
        let mut series = String::from("t,norm,purity,negativity_volume,mean_x,var_x,mean_p,var_p\n");
        for (k, &t) in cfg.times.iter().enumerate() {
            let r = evolve(&w0, &cfg.model, t, &cfg.quad)?;
            let checks = evolution_checks(&r, peak);
            let record = self.slice(t, &r.w_total, Some(r.diagnostics.clone()), checks);
            let o = &record.observables;
            series.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                t, o.norm, o.purity, o.negativity_volume, o.mean_x[0], o.var_x[0], o.mean_p[0], o.var_p[0]
            ));
            self.write_slice(k, &r.w_total, record, grids)?;
        }
        self.files.push(emit(self.dir, "observables.csv", series.as_bytes())?);
        Ok(())
    }

    fn certify(&mut self) -> Result<f64> {
        let cfg = self.cfg;
        let t = *cfg.times.last().expect("validated non-empty");
        if t <= 0.0 {
            return Err(Error::Config(vec!["times: certification needs a positive final time".to_string()]));
        }
        let n = cfg.grid.n_x();
        let c = n / 2;
        let xs = [cfg.grid.x(c - 1), cfg.grid.x(c), cfg.grid.x(c + 1)];
        let ps = [cfg.grid.p(c - 1), cfg.grid.p(c), cfg.grid.p(c + 1)];
        let instance = CertificationInstance {
            grid: cfg.grid,
            initial: cfg.initial,
            params: cfg.model,
            t,
            quad: cfg.quad,
            leak_tol: cfg.leak_tol,
            probes: ProbeSet::product(cfg.grid, &xs, &ps)?,
        };
        let report = certify(&instance, &OracleOptions::default())?;
        self.files.push(emit_json(self.dir, "certification.json", &report)?);
        let mut checks: Vec<Check> = report
            .terms
            .iter()
            .map(|term| {
                let mut ch = Check::at_most(&format!("{}_max_rel_diff", term.term.name()), term.max_rel_diff, report.tolerance);
                ch.pass = term.pass;
                ch
            })
            .collect();
        checks.push(Check::flag("fast_quadrature_converged", report.fast_diagnostics.quadrature_converged()));
        let w0 = make_initial_wigner_tol(&cfg.initial, &cfg.grid, cfg.leak_tol)?;
        let record = self.slice(t, &w0, Some(report.fast_diagnostics.clone()), checks);
        self.slices.push(record);
        Ok(report.total_seconds)
    }
}

/// Executes a validated configuration, writing data files first and the
/// manifest last. On failure the manifest is still written, with the
/// cause, and the error is returned.
pub fn run(cfg: &RunConfig) -> Result<RunManifest> {
    let start = Instant::now();
    let started = chrono::Utc::now().to_rfc3339();
    let dir = ensure_dir(&cfg.outputs.dir).map_err(|e| Error::Config(vec![format!("output.dir: {e}")]))?;
    let mut session = Session {
        cfg,
        dir: &dir,
        files: Vec::new(),
        slices: Vec::new(),
    };
    let outcome = match cfg.mode {
        Mode::Transform => session.transform(),
        Mode::Evolve => session.evolve_all(true),
        Mode::Observables => session.evolve_all(false),
        Mode::Certify => session.certify().map(|_| ()),
    };
    let checks_passed = session.slices.iter().all(|s| s.checks.iter().all(|c| c.pass));
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        environment: environment_label(&cfg.model),
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        status: if outcome.is_ok() { "ok" } else { "failed" }.to_string(),
        failure: outcome.as_ref().err().map(|e| e.to_string()),
        checks_passed: outcome.is_ok() && checks_passed,
        slices: session.slices,
        files: session.files,
    };
    emit_json(&dir, MANIFEST, &manifest)?;
    outcome.map(|_| manifest)
}

/// [`run`] on a dedicated pool of `threads` workers, or on the global
/// pool when `None`.
pub fn run_with_threads(cfg: &RunConfig, threads: Option<usize>) -> Result<RunManifest> {
    match threads {
        None => run(cfg),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(vec![format!("threads: {e}")]))?;
            pool.install(|| run(cfg))
        }
    }
}
