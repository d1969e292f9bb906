use std::path::Path;
use std::process::Command;

use wigner_direct::cli_io::*;
use wigner_direct::error::Error;
use wigner_direct::evolution::{MomentumRule, TimeRule};
use wigner_direct::phase_space::{InitialStateSpec, StateKind};

const BIN: &str = env!("CARGO_BIN_EXE_wigner-direct");

fn config_errors(text: &str) -> Vec<String> {
    match parse_config(text) {
        Err(Error::Config(list)) => list,
        other => panic!("expected a config error, got {other:?}"),
    }
}

fn read_csv(path: &Path) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let ps: Vec<f64> = lines.next().unwrap().split(',').skip(1).map(|s| s.parse().unwrap()).collect();
    let mut xs = Vec::new();
    let mut rows = Vec::new();
    for line in lines {
        let mut cells = line.split(',').map(|s| s.parse::<f64>().unwrap());
        xs.push(cells.next().unwrap());
        rows.push(cells.collect());
    }
    (xs, ps, rows)
}

fn with_dir(text: &str, dir: &Path) -> RunConfig {
    let mut cfg = parse_config(text).unwrap();
    cfg.outputs.dir = dir.to_path_buf();
    cfg
}

#[test]
fn empty_config_takes_the_defaults() {
    let cfg = parse_config("# nothing here\n\n").unwrap();
    assert_eq!(cfg.mode, Mode::Evolve);
    assert_eq!(cfg.grid.n_x(), 64);
    assert_eq!(cfg.model.g, 0.0);
    assert_eq!(cfg.times, vec![0.0]);
    assert_eq!(cfg.initial.kind, StateKind::Gaussian);
    assert_eq!(cfg.quad.time_rule, TimeRule::Exact);
    assert_eq!(cfg.quad.momentum_rule, MomentumRule::Adaptive);
    assert_eq!(cfg.quad.k_max, cfg.model.cutoff);
    for (key, _, _) in KEYS {
        assert!(!key.is_empty());
    }
}

#[test]
fn entries_and_overrides_are_applied() {
    let text = "mode = observables\nmodel.g = 0.2\ninitial.kind = cat\ninitial.separation = 5\ntimes = 0, 0.5, 1.5\nquad.momentum_rule = gauss-legendre\n";
    let cfg = parse_config_with_overrides(text, &["model.g=0.3".to_string(), "grid.n_x = 48".to_string()]).unwrap();
    assert_eq!(cfg.mode, Mode::Observables);
    assert_eq!(cfg.model.g, 0.3);
    assert_eq!(cfg.grid.n_x(), 48);
    assert_eq!(cfg.initial, InitialStateSpec::cat(0.0, 0.0, 1.0, 5.0, 0.0));
    assert_eq!(cfg.times, vec![0.0, 0.5, 1.5]);
    assert_eq!(cfg.quad.momentum_rule, MomentumRule::GaussLegendre);
}

#[test]
fn negative_times_are_rejected() {
    let errs = config_errors("times = 1, -0.5");
    assert!(errs.iter().any(|e| e.starts_with("times")), "{errs:?}");
}

#[test]
fn odd_grids_are_rejected() {
    let errs = config_errors("grid.n_x = 63");
    assert!(errs.iter().any(|e| e.contains("n_x")), "{errs:?}");
}

#[test]
fn unknown_keys_get_a_suggestion() {
    let errs = config_errors("modle.g = 1");
    assert!(errs.iter().any(|e| e.contains("did you mean `model.g`")), "{errs:?}");
}

#[test]
fn every_problem_is_reported_at_once() {
    let errs = config_errors("grid.n_x = 7\nmodel.m_s = -1\ninitial.kind = dog\ntimes = 2, 1\nmodel.g = abc\n");
    assert!(errs.len() >= 5, "{errs:?}");
}

#[test]
fn transform_mode_writes_the_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = with_dir("mode = transform\ninitial.sigma = 0.8\n", tmp.path());
    let manifest = run(&cfg).unwrap();
    assert!(manifest.success());
    let (xs, ps, rows) = read_csv(&tmp.path().join("W_t000.csv"));
    assert_eq!((xs.len(), ps.len()), (64, 64));
    let spec = InitialStateSpec::gaussian(0.0, 0.0, 0.8);
    for (i, x) in xs.iter().enumerate() {
        for (m, p) in ps.iter().enumerate() {
            assert!((rows[i][m] - spec.wigner_1d(*x, *p)).abs() <= 1e-10);
        }
    }
    let purity = manifest.slices[0].observables.purity;
    assert!((purity - 1.0).abs() <= PURITY_TOL);
}

#[test]
fn free_evolution_files_follow_the_shear() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = with_dir("initial.p0 = 0.5\ntimes = 0, 1\n", tmp.path());
    run(&cfg).unwrap();
    let (xs, ps, rows) = read_csv(&tmp.path().join("W_t001.csv"));
    let spec = InitialStateSpec::gaussian(0.0, 0.5, 1.0);
    for (i, x) in xs.iter().enumerate() {
        for (m, p) in ps.iter().enumerate() {
            assert!((rows[i][m] - spec.wigner_1d(x - p, *p)).abs() <= 1e-9);
        }
    }
    let series = std::fs::read_to_string(tmp.path().join("observables.csv")).unwrap();
    assert_eq!(series.lines().count(), 3);
}

#[test]
fn plot_files_hold_one_triplet_per_node() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = with_dir("grid.n_x = 32\ngrid.dx = 0.5\ninitial.kind = cat\ninitial.separation = 4\n", tmp.path());
    run(&cfg).unwrap();
    let text = std::fs::read_to_string(tmp.path().join("W_t000.dat")).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|s| s.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 32 * 32);
    assert!(rows.iter().all(|r| r.len() == 3));
    assert!(rows.iter().any(|r| r[2] < -0.05), "cat fringes should be negative");
    let marg = std::fs::read_to_string(tmp.path().join("W_t000_marginals.dat")).unwrap();
    assert_eq!(marg.lines().filter(|l| !l.starts_with('#')).count(), 32);
}

#[test]
fn reruns_are_byte_identical_and_checksummed() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "model.g = 0.1\ngrid.n_x = 32\ngrid.dx = 0.5\ntimes = 0.5\n";
    let a = run(&with_dir(text, &tmp.path().join("a"))).unwrap();
    let b = run_with_threads(&with_dir(text, &tmp.path().join("b")), Some(3)).unwrap();
    assert_eq!(a.files.len(), b.files.len());
    for (fa, fb) in a.files.iter().zip(&b.files) {
        assert_eq!(fa.sha256, fb.sha256, "{}", fa.path);
        let bytes = std::fs::read(tmp.path().join("a").join(&fa.path)).unwrap();
        assert_eq!(bytes.len() as u64, fa.bytes);
        assert_eq!(sha256_hex(&bytes), fa.sha256);
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("a").join(MANIFEST)).unwrap()).unwrap();
    assert_eq!(manifest["status"], "ok");
    assert_eq!(manifest["slices"][0]["environment"], "vacuum");
}

#[test]
fn failures_still_leave_a_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = with_dir("grid.n_x = 16\ngrid.dx = 0.5\ninitial.x0 = 3\ntimes = 1\n", tmp.path());
    assert!(matches!(run(&cfg), Err(Error::BoxLeak(_))));
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join(MANIFEST)).unwrap()).unwrap();
    assert_eq!(manifest["status"], "failed");
    assert!(manifest["failure"].as_str().unwrap().contains("box"));
}

#[test]
fn binary_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, format!("output.dir = {}\n", tmp.path().join("out").display())).unwrap();
    let ok = Command::new(BIN).arg("transform").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(tmp.path().join("out").join(MANIFEST).exists());

    let bad = Command::new(BIN)
        .args(["evolve", "--config"])
        .arg(&cfg)
        .args(["--override", "grid.n_x=9"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("n_x"));
}

#[test]
fn certify_mode_reports_through_the_exit_status() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cert.cfg");
    std::fs::write(
        &cfg,
        format!(
            "model.g = 0.1\nmodel.cutoff = 4\ngrid.n_x = 16\ngrid.dx = 0.625\ninitial.leak_tol = 1e-4\ntimes = 0.5\noutput.dir = {}\n",
            tmp.path().join("good").display()
        ),
    )
    .unwrap();
    let good = Command::new(BIN).args(["certify", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(good.status.code(), Some(0), "{}", String::from_utf8_lossy(&good.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("good").join("certification.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["terms"].as_array().unwrap().len(), 3);

    let coarse = Command::new(BIN)
        .args(["certify", "--config"])
        .arg(&cfg)
        .args(["--override", "quad.momentum_rule=trapezoid"])
        .args(["--override", "quad.n_k=16"])
        .args(["--override", &format!("output.dir={}", tmp.path().join("coarse").display())])
        .output()
        .unwrap();
    assert_eq!(coarse.status.code(), Some(1), "{}", String::from_utf8_lossy(&coarse.stderr));
}
