use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({nrows}x{ncols})")]
    NotSquare { nrows: usize, ncols: usize },

    #[error("dimension {dim} is not a power {exponent} of any integer base >= 1")]
    NotPerfectPower { dim: usize, exponent: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entries length {found} does not match {nrows}x{ncols}")]
    EntryCount { nrows: usize, ncols: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameter for {family}: {constraint}")]
    InvalidParameter { family: String, constraint: String },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is ill-conditioned (condition estimate {0:.3e})")]
    IllConditioned(f64),

    #[error("matrix is not diagonal")]
    NotDiagonal,

    #[error("representation dimension {dim} exceeds cap {cap}; pass force to override")]
    CapExceeded { dim: u128, cap: u128 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),

    #[error("substitution is cyclic at `{0}`")]
    CyclicSubstitution(String),

    #[error("zero polynomial is not a valid equation")]
    ZeroPolynomial,

    #[error("orbit step {step} ({op}) left the solution set: residual {residual:.3e} > tol {tol:.1e}")]
    OrbitBroken {
        step: usize,
        op: String,
        residual: f64,
        tol: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
