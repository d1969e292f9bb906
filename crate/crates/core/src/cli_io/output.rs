//! File emission: CSV grids, gnuplot triplets, marginal curves, JSON, all
//! written atomically and inventoried with SHA-256 checksums.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::evolution::EvolutionResult;
use crate::fourier::unflatten;
use crate::phase_space::{marginals, WignerFunction};

/// An emitted file, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Writes `bytes` to `dir/name` and returns its inventory record.
pub fn emit(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileRecord> {
    write_atomic(&dir.join(name), bytes)?;
    Ok(FileRecord {
        path: name.to_string(),
        sha256: sha256_hex(bytes),
        bytes: bytes.len() as u64,
    })
}

pub fn emit_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<FileRecord> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(dir, name, text.as_bytes())
}

fn num(out: &mut String, v: f64) {
    let _ = write!(out, "{v:.16e}");
}

fn coords(out: &mut String, idx: &[usize], f: impl Fn(usize) -> f64) {
    for (a, &i) in idx.iter().enumerate() {
        if a > 0 {
            out.push(';');
        }
        num(out, f(i));
    }
}

/// One row per position node, one column per momentum node. The header row
/// and first column carry the coordinates; in three dimensions a
/// coordinate tuple is written `a;b;c`.
pub fn wigner_csv(w: &WignerFunction) -> String {
    let grid = w.grid;
    let d = grid.dim();
    let n = grid.n_x();
    let npos = grid.positions();
    let mut idx = vec![0; d];
    let mut out = String::from("x\\p");
    for m in 0..npos {
        out.push(',');
        unflatten(m, n, &mut idx);
        coords(&mut out, &idx, |i| grid.p(i));
    }
    out.push('\n');
    for (r, row) in w.values.chunks_exact(npos).enumerate() {
        unflatten(r, n, &mut idx);
        coords(&mut out, &idx, |i| grid.x(i));
        for &v in row {
            out.push(',');
            num(&mut out, v);
        }
        out.push('\n');
    }
    out
}

/// `x p W` triplets with a blank line after each `x` block. In three
/// dimensions the slice runs through the central node of the other axes.
pub fn plot_triplets(w: &WignerFunction) -> String {
    let grid = w.grid;
    let d = grid.dim();
    let n = grid.n_x();
    let c = n / 2;
    let mut out = String::new();
    let mut full = vec![c; 2 * d];
    for i in 0..n {
        for m in 0..n {
            full[0] = i;
            full[d] = m;
            let flat = full.iter().fold(0, |acc, &k| acc * n + k);
            num(&mut out, grid.x(i));
            out.push(' ');
            num(&mut out, grid.p(m));
            out.push(' ');
            num(&mut out, w.values[flat]);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Columns `x  P(x)  p  P(p)` along the first axis, other axes integrated.
pub fn marginal_curves(w: &WignerFunction) -> String {
    let grid = w.grid;
    let d = grid.dim();
    let n = grid.n_x();
    let m = marginals(w);
    let mut px = vec![0.0; n];
    let mut pp = vec![0.0; n];
    let rest = grid.dx().powi(d as i32 - 1);
    let rest_p = grid.dp().powi(d as i32 - 1);
    let mut idx = vec![0; d];
    for k in 0..grid.positions() {
        unflatten(k, n, &mut idx);
        px[idx[0]] += m.position[k] * rest;
        pp[idx[0]] += m.momentum[k] * rest_p;
    }
    let mut out = String::from("# x P(x) p P(p)\n");
    for i in 0..n {
        num(&mut out, grid.x(i));
        out.push(' ');
        num(&mut out, px[i]);
        out.push(' ');
        num(&mut out, grid.p(i));
        out.push(' ');
        num(&mut out, pp[i]);
        out.push('\n');
    }
    out
}

/// Plot-ready files for one Wigner function: `{stem}.dat` triplets and
/// `{stem}_marginals.dat`.
pub fn emit_wigner_plot_data(w: &WignerFunction, dir: &Path, stem: &str) -> Result<Vec<FileRecord>> {
    Ok(vec![
        emit(dir, &format!("{stem}.dat"), plot_triplets(w).as_bytes())?,
        emit(dir, &format!("{stem}_marginals.dat"), marginal_curves(w).as_bytes())?,
    ])
}

/// [`emit_wigner_plot_data`] for the assembled `W(t)` of an evolution.
pub fn emit_plot_data(result: &EvolutionResult, dir: &Path, stem: &str) -> Result<Vec<FileRecord>> {
    emit_wigner_plot_data(&result.w_total, dir, stem)
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(format!(".write-test{}", std::process::id()));
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))?;
    Ok(dir.to_path_buf())
}
