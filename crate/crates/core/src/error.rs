use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid initial state: {0}")]
    InvalidState(String),

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("density matrix is not Hermitian (defect {defect:.3e} exceeds {tolerance:.1e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("state leaks out of the box: {0}")]
    BoxLeak(String),

    #[error("equal-time system propagator requested pointwise; use the kernel-integrated form")]
    EqualTime,

    #[error("{operation} is not available for spatial dimension {dim}")]
    UnsupportedDimension { operation: &'static str, dim: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("configuration error:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// `Ok` when `problems` is empty, otherwise one error listing all of them.
    pub(crate) fn collect(problems: Vec<String>, ctor: fn(String) -> Error) -> Result<()> {
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ctor(problems.join("; ")))
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
