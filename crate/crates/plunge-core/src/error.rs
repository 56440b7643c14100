use thiserror::Error;

/// Errors surfaced by the core pipeline.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain spec parse error: {0}")]
    Parse(String),

    #[error("resolution {resolution} too coarse for bounding box diameter {diameter} (max {max})")]
    ResolutionTooCoarse {
        resolution: f64,
        diameter: f64,
        max: f64,
    },

    #[error("exact Fourier transform unavailable for this domain kind; use the rasterized mode")]
    ExactTransformUnavailable,

    #[error("domain escapes the fundamental cell (-L/2, L/2)^d for L = {l}")]
    DomainOutsideCell { l: f64 },

    #[error("frequency set of size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("quadrature grid of {points} points exceeds the oracle limit {limit}")]
    OracleGridTooLarge { points: usize, limit: usize },

    #[error("matrix is not Hermitian within tolerance (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("eigenvalue {value} outside [-{tol:.1e}, 1+{tol:.1e}]")]
    SpectrumOutOfRange { value: f64, tol: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("frame index j = {0:?} outside the partition truncation")]
    OutOfTruncation(Vec<i64>),

    #[error("truncation budget exhausted: {0}")]
    TruncationBudget(String),

    #[error("certified tail {tail:.3e} exceeds 1% of the computed sum {sum:.3e}; enlarge the guard box")]
    TailTooLarge { tail: f64, sum: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("degenerate regression design: {0}")]
    DegenerateFit(String),

    #[error("sweep config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
