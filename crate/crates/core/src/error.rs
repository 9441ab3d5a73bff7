use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("degenerate extension step: {0}")]
    DegenerateStep(String),
    #[error("tower limit exceeded: {0}")]
    TowerLimit(String),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("operation requires the univariate backend: {0}")]
    Backend(String),
    #[error("not a purely inseparable exponent-one extension: {0}")]
    NotExponentOne(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("not found within search bound: {0}")]
    NotFound(String),
    #[error("hypothesis not established: {0}")]
    Hypothesis(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("no applicable rule: {0}")]
    NoRule(String),
}

impl Error {
    /// Outcomes that mean "unknown / not found within bounds" rather than a hard error.
    pub fn is_search_exhausted(&self) -> bool {
        matches!(self, Error::NotFound(_) | Error::Hypothesis(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
