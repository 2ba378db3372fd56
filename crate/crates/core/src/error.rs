use thiserror::Error;

/// Errors raised by the algebra, module, and experiment layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over the base field")]
    ReducibleModulus,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("field of order {0} exceeds the supported maximum")]
    FieldTooLarge(u64),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("denominator vanishes modulo the place")]
    DenominatorVanishes,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not coprime to the place")]
    NotCoprime,
    #[error("operands live in different field contexts")]
    MixedContexts,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("rank must be at least 1")]
    EmptyRank,
    #[error("bad reduction at {place}")]
    BadReduction { place: String },
    #[error("torsion field degree exceeds cap {cap}")]
    TorsionFieldCapExceeded { cap: usize },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("wrong rank: expected {expected}, found {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("twisting element is zero")]
    ZeroGamma,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("no Frobenius characteristic polynomial found at {place}")]
    NoSolution { place: String },
    #[error("Frobenius system at {place} has a solution space of dimension {dim}")]
    AmbiguousSolution { place: String, dim: usize },
    #[error("division by {k} in characteristic {p} (Newton identities need p > n)")]
    CharacteristicDivision { k: usize, p: u64 },
    #[error("generated group exceeds cap {cap}")]
    GroupCapExceeded { cap: usize },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("internal anomaly: {0}")]
    Anomaly(String),
}

impl Error {
    /// True for failures that indicate a bug or a violated theoretical
    /// expectation rather than invalid input.
    pub fn is_anomaly(&self) -> bool {
        matches!(
            self,
            Error::NoSolution { .. } | Error::AmbiguousSolution { .. } | Error::Anomaly(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
