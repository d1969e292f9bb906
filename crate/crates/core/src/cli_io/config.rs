//! Plain-text `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment; keys are dotted paths.
//! Every key is optional and falls back to the default listed in
//! [`KEYS`]. Lists (`times`) are comma separated.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{MomentumRule, QuadratureSpec, TimeRule};
use crate::phase_space::{InitialStateSpec, PhaseSpaceGrid, StateKind, DEFAULT_LEAK_TOL};
use crate::propagators::{ModelParams, Regulator};

/// Recognised keys with their defaults and meaning.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("mode", "evolve", "transform | evolve | observables | certify"),
    ("model.d", "1", "spatial dimension, 1 or 3"),
    ("model.m_s", "1", "particle mass"),
    ("model.m_e", "1", "scalar-field mass"),
    ("model.g", "0", "Yukawa coupling"),
    ("model.temperature", "0", "environment temperature, 0 = vacuum"),
    ("model.cutoff", "50", "UV momentum cutoff"),
    ("model.regulator", "smooth", "smooth | sharp"),
    ("grid.n_x", "64", "nodes per axis, even, at least 8"),
    ("grid.dx", "0.35", "position spacing"),
    ("grid.x_min", "-n_x*dx/2", "leftmost node"),
    ("initial.kind", "gaussian", "gaussian | cat"),
    ("initial.x0", "0", "centre"),
    ("initial.p0", "0", "mean momentum"),
    ("initial.sigma", "1", "packet width"),
    ("initial.separation", "0", "cat separation"),
    ("initial.phase", "0", "cat relative phase"),
    ("initial.leak_tol", "1e-6", "allowed boundary value relative to the peak"),
    ("times", "0", "output times, strictly increasing"),
    ("quad.n_t", "12", "time nodes for the fixed time rules"),
    ("quad.n_k", "24", "momentum nodes per segment"),
    ("quad.k_max", "cutoff", "momentum-transfer cutoff"),
    ("quad.rel_tol", "1e-9", "relative tolerance"),
    ("quad.time_rule", "exact", "exact | gauss-legendre | trapezoid"),
    ("quad.momentum_rule", "adaptive", "adaptive | gauss-legendre | trapezoid"),
    ("output.dir", "out", "output directory"),
    ("output.csv", "true", "write W grids as CSV"),
    ("output.plot", "true", "write gnuplot triplets"),
    ("output.marginals", "true", "write marginal curves"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Transform,
    Evolve,
    Observables,
    Certify,
}

/// Parses a bare keyword into one of the serde-named enums.
fn keyword<T: DeserializeOwned>(v: &str) -> Option<T> {
    serde_json::from_value(serde_json::Value::String(v.to_string())).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub csv: bool,
    pub plot: bool,
    pub marginals: bool,
}

/// A validated run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub model: ModelParams,
    pub grid: PhaseSpaceGrid,
    pub initial: InitialStateSpec,
    pub leak_tol: f64,
    pub times: Vec<f64>,
    pub quad: QuadratureSpec,
    pub outputs: OutputSpec,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
    problems: Vec<String>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn get<T>(&mut self, key: &str, default: T, parse: impl Fn(&str) -> Option<T>, what: &str) -> T {
        match self.map.get(key) {
            None => default,
            Some((line, v)) => match parse(v) {
                Some(x) => x,
                None => {
                    self.problems.push(format!("line {line}: `{key}` expects {what}, got `{v}`"));
                    default
                }
            },
        }
    }

    fn f64(&mut self, key: &str, default: f64) -> f64 {
        self.get(key, default, |v| v.parse().ok(), "a number")
    }

    fn usize(&mut self, key: &str, default: usize) -> usize {
        self.get(key, default, |v| v.parse().ok(), "a non-negative integer")
    }

    fn bool(&mut self, key: &str, default: bool) -> bool {
        self.get(
            key,
            default,
            |v| match v {
                "true" | "yes" | "on" | "1" => Some(true),
                "false" | "no" | "off" | "0" => Some(false),
                _ => None,
            },
            "true or false",
        )
    }
}

fn suggest(key: &str) -> Option<&'static str> {
    KEYS.iter()
        .map(|(k, _, _)| (*k, strsim::levenshtein(key, k)))
        .min_by_key(|&(_, d)| d)
        .filter(|&(_, d)| d <= key.len().max(4) / 2 + 2)
        .map(|(k, _)| k)
}

fn split_line(line: &str) -> Option<(String, String)> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return None;
    }
    let (k, v) = body.split_once('=').unwrap_or((body, ""));
    Some((k.trim().to_string(), v.trim().to_string()))
}

fn collect_entries(text: &str, overrides: &[String]) -> Entries {
    let mut map = BTreeMap::new();
    let mut problems = Vec::new();
    let mut add = |line_no: usize, line: &str, replace: bool, problems: &mut Vec<String>| {
        let Some((k, v)) = split_line(line) else {
            return;
        };
        let place = if replace {
            "override".to_string()
        } else {
            format!("line {line_no}")
        };
        if !line.contains('=') || k.is_empty() {
            problems.push(format!("{place}: expected `key = value`, got `{}`", line.trim()));
            return;
        }
        if !KEYS.iter().any(|(known, _, _)| *known == k) {
            let hint = suggest(&k).map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default();
            problems.push(format!("{place}: unknown key `{k}`{hint}"));
            return;
        }
        if !replace && map.contains_key(&k) {
            problems.push(format!("{place}: `{k}` is set more than once"));
            return;
        }
        map.insert(k, (line_no, v));
    };
    for (i, line) in text.lines().enumerate() {
        add(i + 1, line, false, &mut problems);
    }
    for o in overrides {
        add(0, o, true, &mut problems);
    }
    Entries { map, problems }
}

/// Parses and validates a configuration; reports every problem found.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_overrides(text, &[])
}

/// As [`parse_config`], with `key=value` overrides applied on top.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut e = collect_entries(text, overrides);

    let mode = e.get("mode", Mode::Evolve, keyword, "transform, evolve, observables or certify");
    let regulator = e.get("model.regulator", Regulator::Smooth, keyword, "smooth or sharp");
    let model = ModelParams {
        d: e.usize("model.d", 1),
        m_s: e.f64("model.m_s", 1.0),
        m_e: e.f64("model.m_e", 1.0),
        g: e.f64("model.g", 0.0),
        temperature: e.f64("model.temperature", 0.0),
        cutoff: e.f64("model.cutoff", 50.0),
        regulator,
    };
    e.problems.extend(model.problems().into_iter().map(|p| format!("model: {p}")));

    let n_x = e.usize("grid.n_x", 64);
    let dx = e.f64("grid.dx", 0.35);
    let x_min = e.f64("grid.x_min", -(n_x as f64 / 2.0) * dx);
    let grid = match PhaseSpaceGrid::new(model.d, n_x, dx, x_min) {
        Ok(g) => Some(g),
        Err(err) => {
            e.problems.push(format!("grid: {err}"));
            None
        }
    };

    let kind = e.get("initial.kind", StateKind::Gaussian, keyword, "gaussian or cat");
    let initial = InitialStateSpec {
        kind,
        x0: e.f64("initial.x0", 0.0),
        p0: e.f64("initial.p0", 0.0),
        sigma: e.f64("initial.sigma", 1.0),
        separation: e.f64("initial.separation", 0.0),
        phase: e.f64("initial.phase", 0.0),
    };
    if let Err(err) = initial.validate() {
        e.problems.push(format!("initial: {err}"));
    }
    let leak_tol = e.f64("initial.leak_tol", DEFAULT_LEAK_TOL);
    if !(leak_tol > 0.0 && leak_tol < 1.0) {
        e.problems.push(format!("initial.leak_tol must lie in (0, 1), got {leak_tol}"));
    }

    let times = e.get(
        "times",
        vec![0.0],
        |v| v.split(',').map(|s| s.trim().parse::<f64>().ok()).collect::<Option<Vec<f64>>>(),
        "a comma-separated list of numbers",
    );
    if times.is_empty() {
        e.problems.push("times: at least one output time is required".to_string());
    }
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        e.problems.push(format!("times: every output time must be finite and >= 0, got {t}"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        e.problems.push(format!("times: must be strictly increasing, got {times:?}"));
    }

    let defaults = QuadratureSpec::new(&model);
    let time_rule = e.get("quad.time_rule", TimeRule::Exact, keyword, "exact, gauss-legendre or trapezoid");
    let momentum_rule = e.get(
        "quad.momentum_rule",
        MomentumRule::Adaptive,
        keyword,
        "adaptive, gauss-legendre or trapezoid",
    );
    let quad = QuadratureSpec {
        n_t: e.usize("quad.n_t", defaults.n_t),
        n_k: e.usize("quad.n_k", defaults.n_k),
        k_max: e.f64("quad.k_max", defaults.k_max),
        rel_tol: e.f64("quad.rel_tol", defaults.rel_tol),
        time_rule,
        momentum_rule,
    };
    e.problems.extend(quad.problems(&model).into_iter().map(|p| format!("quad: {p}")));

    let dir = e.raw("output.dir").map(|(_, v)| v.clone()).unwrap_or_else(|| "out".to_string());
    if dir.is_empty() {
        e.problems.push("output.dir must not be empty".to_string());
    }
    let outputs = OutputSpec {
        dir: PathBuf::from(dir),
        csv: e.bool("output.csv", true),
        plot: e.bool("output.plot", true),
        marginals: e.bool("output.marginals", true),
    };

    match (e.problems.is_empty(), grid) {
        (true, Some(grid)) => Ok(RunConfig {
            mode,
            model,
            grid,
            initial,
            leak_tol,
            times,
            quad,
            outputs,
        }),
        _ => Err(Error::Config(e.problems)),
    }
}
