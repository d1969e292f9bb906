//! Configuration, orchestration and persistence.
//!
//! A run reads a plain-text configuration (see [`KEYS`]), evaluates the
//! requested mode at each output time and writes, per time `k`:
//!
//! - `W_t{k:03}.csv`: the Wigner grid, one row per position node;
//! - `W_t{k:03}.json`: observables, diagnostics and tolerance checks;
//! - `W_t{k:03}.dat`, `W_t{k:03}_marginals.dat`: gnuplot-ready data.
//!
//! followed by `observables.csv` and finally `manifest.json`, which lists
//! every file with its SHA-256. Data files contain no timestamps.

mod config;
mod output;
mod run;

pub use config::{parse_config, parse_config_with_overrides, Mode, OutputSpec, RunConfig, KEYS};
pub use output::{
    emit_plot_data, emit_wigner_plot_data, marginal_curves, plot_triplets, sha256_hex, wigner_csv, write_atomic,
    FileRecord,
};
pub use run::{
    environment_label, run, run_with_threads, Check, RunManifest, SliceRecord, HERMITICITY_TOL, IMAG_RESIDUE_TOL,
    MANIFEST, PURITY_TOL, RHO_HERMITICITY_TOL, TRACE_REL_TOL,
};
