use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("family parameter t must be positive, got {0}")]
    NonPositiveParameter(f64),

    #[error("parse error in {input:?} at byte {position}: {message}")]
    Parse { input: String, position: usize, message: String },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid tropical complex: {0}")]
    InvalidComplex(String),

    #[error("empty support")]
    EmptySupport,

    #[error("polyhedral cell is empty")]
    EmptyCell,

    #[error("invalid lift parameters: {0}")]
    InvalidLift(String),

    #[error("lift regeneration cap of {cap} retries exceeded; last degeneracy: {last}")]
    RetryCapExceeded { cap: u32, last: String },

    #[error("non-transverse configuration: {0}")]
    Degenerate(String),

    #[error("trop(X) must be supplied as a complex file when G has {0} polynomials")]
    MissingComplex(usize),

    #[error("underdetermined variety description: {have} generators, need at least {need}")]
    Underdetermined { have: usize, need: usize },

    #[error("multiple root of the initial system at omega = {omega}; longer Puiseux truncations are required")]
    MultipleRoot { omega: String },

    #[error("initial system yields {found} roots but the intersection multiplicity is {expected}")]
    RootCountMismatch { found: usize, expected: u64 },

    #[error("no admissible epsilon down to 2^-{min_exponent}")]
    NoAdmissibleEpsilon { min_exponent: u32 },

    #[error("{failed} of {launched} homotopy paths failed")]
    PathFailures { failed: usize, launched: usize },

    #[error("integer overflow in lattice computation")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that a fresh lift might cure.
    pub fn is_lift_related(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_)
                | Error::RootCountMismatch { .. }
                | Error::NoAdmissibleEpsilon { .. }
                | Error::PathFailures { .. }
        )
    }
}
