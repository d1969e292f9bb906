//! Phase-space grids, the Wigner/density-matrix transforms and
//! phase-space observables.

mod density;
mod grid;
mod initial;
mod observables;
mod transform;
mod wigner;

pub use density::{DensityMatrix, MAX_EIGEN_NODES};
pub use grid::PhaseSpaceGrid;
pub use initial::{
    make_initial_density, make_initial_wigner, make_initial_wigner_tol, InitialStateSpec, StateKind,
    DEFAULT_LEAK_TOL,
};
pub use observables::{marginals, observables, Marginals, Observables, NEGATIVITY_REFINEMENT};
pub use transform::{
    density_from_wigner, wigner_from_density, wigner_from_density_report, HERMITICITY_TOL, IMAG_TOL,
};
pub use wigner::WignerFunction;
