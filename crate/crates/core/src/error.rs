use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("oracle needs at least 2 input bits, got n = {0}")]
    InvalidSize(usize),

    #[error("expected {expected} penalties for n = {n}, got {got}")]
    PenaltyDimension { n: usize, expected: usize, got: usize },

    #[error("invalid penalty: {0}")]
    InvalidPenalty(String),

    #[error("assignment has {got} bits, model has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },

    #[error("input registers are identical; no period can be recovered")]
    IdenticalInputs,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("{vars} variables exceed the enumeration cap of {cap}")]
    SizeCapExceeded { vars: usize, cap: usize },

    #[error("model is not chain-structured: {0}")]
    NotChain(String),

    #[error("ground state degeneracy {count} exceeds the listing limit of {limit}")]
    DegeneracyTooLarge { count: u128, limit: usize },

    #[error("invalid anneal schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("state with zero probability is never sampled; expectation is infinite")]
    Unreachable,

    #[error("cannot fit: {0}")]
    NoFit(String),

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad parameters rather than by the computation or I/O.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidSize(_)
                | Error::PenaltyDimension { .. }
                | Error::InvalidPenalty(_)
                | Error::InvalidSchedule(_)
                | Error::InvalidProbability(_)
                | Error::UnknownStrategy { .. }
                | Error::InvalidConfig(_)
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Json(_))
    }
}
