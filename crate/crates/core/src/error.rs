use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {value} outside universe [1, {bound}]")]
    OutOfUniverse { value: u64, bound: u32 },

    #[error("undefined span: the set is empty")]
    UndefinedSpan,

    #[error("too small for 3k-4 regime: |S| = {0}, need at least 3")]
    TooSmallForFreiman(usize),

    #[error("instance too large for exact enumeration: about {estimated} candidates, budget {budget}")]
    InstanceTooLarge { estimated: BigUint, budget: u64 },

    #[error("search budget of {budget} nodes exceeded after visiting {visited} nodes ({partial} sets counted before abort)")]
    BudgetExceeded {
        budget: u64,
        visited: u64,
        partial: BigUint,
    },

    #[error("universe of size {size} too large for the exhaustive oracle (limit {limit})")]
    OracleUniverseTooLarge { size: usize, limit: usize },

    #[error("rejection sampling infeasible: estimated acceptance {acceptance:.3e} is below {threshold:.0e}; use exact enumeration instead")]
    SamplingInfeasible { acceptance: f64, threshold: f64 },

    #[error("unknown bound formula `{0}` (expected one of CEthm, S+S, S+S2, parts, conj)")]
    UnknownFormula(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for the errors that mean "this instance is beyond the configured budget".
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::InstanceTooLarge { .. }
                | Error::OracleUniverseTooLarge { .. }
                | Error::SamplingInfeasible { .. }
        )
    }
}
