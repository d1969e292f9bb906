//! Time-dependent Wigner functions of a non-relativistic particle coupled
//! to a relativistic scalar environment, computed directly from the
//! initial Wigner function through second order in a Yukawa coupling.
//!
//! Natural units `ħ = c = 1` are used throughout: positions and times in
//! inverse mass, momenta and masses in mass.

pub mod cli_io;
pub mod error;
pub mod evolution;
pub mod fourier;
pub mod oracle;
pub mod phase_space;
pub mod propagators;
pub mod quadrature;

pub use error::{Error, Result};
pub use phase_space::{
    density_from_wigner, make_initial_wigner, marginals, observables, wigner_from_density,
    DensityMatrix, InitialStateSpec, Observables, PhaseSpaceGrid, StateKind, WignerFunction,
};
pub use evolution::{evolve, evolve_zeroth, EvolutionResult, QuadratureSpec};
pub use propagators::{ModelParams, Regulator, SpacetimePoint};
