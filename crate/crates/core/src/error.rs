use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh resolution: {0} nodes per side (need at least 2)")]
    InvalidResolution(usize),

    #[error("invalid barycentric point {0:?}")]
    InvalidBarycentric([f64; 3]),

    #[error("unsupported quadrature degree {requested}; supported degrees are 1..={max}")]
    UnsupportedDegree { requested: usize, max: usize },

    #[error("unknown problem id {0}; expected 1 (clamped) or 2 (normal-only)")]
    UnknownProblem(u32),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is not symmetric: relative asymmetry {asymmetry:.3e} exceeds {tolerance:.1e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("singular factorization of {system} at pivot {pivot}")]
    Singular { system: String, pivot: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("baseline unstable: smallest eigenvalue {lambda_min:.6e} at zero load")]
    BaselineUnstable { lambda_min: f64 },

    #[error("unstable configuration: smallest eigenvalue {lambda_min:.6e} at load {gamma_tilde} on {nodes}x{nodes} mesh")]
    Unstable { nodes: usize, gamma_tilde: f64, lambda_min: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
