use thiserror::Error;

/// Errors produced by the semigroup kernels, the random model and the studies.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid generators: {0}")]
    InvalidGenerators(String),

    #[error("generators have gcd {gcd}; the semigroup is not co-finite")]
    NotCofinite { gcd: u64 },

    #[error("generator {value} exceeds the supported bound 2^31")]
    TooLarge { value: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sampler did not converge for p={p}, trial {trial}: truncation would exceed {cap}")]
    SamplerDidNotConverge { p: f64, trial: u64, cap: u64 },

    #[error("check `{check}` needs {needed} cases but the budget is {budget}")]
    BudgetExceeded {
        check: String,
        needed: u128,
        budget: u128,
    },

    #[error("row violates its invariants: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
