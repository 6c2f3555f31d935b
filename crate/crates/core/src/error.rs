use thiserror::Error;

/// Syntax or semantic error in an input expression, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("nothing to eliminate: both inputs are constant in the main variable")]
    NothingToEliminate,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("defining function is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("point is not on the hypersurface (|rho| = {0:e})")]
    NotOnHypersurface(f64),
    #[error("operation requires n = 2, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("too few samples on the hypersurface: found {found}, need {needed}")]
    TooFewSamples { found: usize, needed: usize },
    #[error("Segre degenerate origin")]
    SegreDegenerateOrigin,
    #[error("no admissible direction: {0}")]
    NoAdmissibleDirection(String),
    #[error("resultant vanishes identically after cleanup")]
    DegenerateResultant,
    #[error("branch degree differs across directions: {0:?}")]
    InconsistentDegree(Vec<usize>),
    #[error("candidate first integral has vanishing gradient")]
    ConstantIntegral,
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hypersurface is not Levi-flat")]
    NotLeviFlat,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
