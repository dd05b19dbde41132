use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("state space must contain at least one state")]
    EmptyStateSpace,
    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),
    #[error("entry ({row}, {col}) is negative or not finite: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}, which is not within 1e-9 of 1")]
    RowSumViolation { row: usize, sum: f64 },
    #[error("transition matrix is not irreducible ({components} communicating classes)")]
    NotIrreducible { components: usize },
    #[error("stationary solver stopped after {iterations} iterations with residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("initial state {index} is outside a {n}-state space")]
    InvalidInitState { index: usize, n: usize },
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("state index {index} is outside a {n}-state space")]
    StateOutOfRange { index: usize, n: usize },
    #[error("history is empty")]
    EmptyHistory,
    #[error("invalid kernel: {0}")]
    InvalidKernel(&'static str),
    #[error("symbol at position {position} has zero model probability")]
    ZeroProbabilityEvent { position: usize },
    #[error("sequence has {len} symbols, at least {needed} are required")]
    TooShort { len: usize, needed: usize },
    #[error("largest strongly connected component is state {state} alone, with no self-transition")]
    DegenerateComponent { state: usize },
    #[error("probability {0} is outside the open interval (0, 1)")]
    InvalidProbability(f64),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("sequence {0} is empty")]
    EmptySequence(usize),
    #[error("rare token `{0}` already occurs in the vocabulary")]
    RareTokenCollision(String),
    #[error("initial parameters give zero likelihood to sequence {sequence}, position {position}")]
    DegenerateInit { sequence: usize, position: usize },
    #[error("lag {lag} needs a sequence longer than {len} symbols")]
    LagTooLarge { lag: usize, len: usize },
    #[error("not a probability distribution: {0}")]
    NotADistribution(&'static str),
    #[error("contingency table has no observations")]
    EmptyTable,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

impl Error {
    /// Stable variant name, used for machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::EmptyStateSpace => "EmptyStateSpace",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::NegativeEntry { .. } => "NegativeEntry",
            Error::RowSumViolation { .. } => "RowSumViolation",
            Error::NotIrreducible { .. } => "NotIrreducible",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInitState { .. } => "InvalidInitState",
            Error::UnknownToken(_) => "UnknownToken",
            Error::StateOutOfRange { .. } => "StateOutOfRange",
            Error::EmptyHistory => "EmptyHistory",
            Error::InvalidKernel(_) => "InvalidKernel",
            Error::ZeroProbabilityEvent { .. } => "ZeroProbabilityEvent",
            Error::TooShort { .. } => "TooShort",
            Error::DegenerateComponent { .. } => "DegenerateComponent",
            Error::InvalidProbability(_) => "InvalidProbability",
            Error::EmptyCorpus => "EmptyCorpus",
            Error::EmptySequence(_) => "EmptySequence",
            Error::RareTokenCollision(_) => "RareTokenCollision",
            Error::DegenerateInit { .. } => "DegenerateInit",
            Error::LagTooLarge { .. } => "LagTooLarge",
            Error::NotADistribution(_) => "NotADistribution",
            Error::EmptyTable => "EmptyTable",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
