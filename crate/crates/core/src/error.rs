use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero is not a positive natural")]
    Zero,

    /// The iteration budget ran out before the stopping condition was seen.
    /// This means "undecided", never "diverges".
    #[error("budget of {budget} iterations exhausted before convergence (undecided)")]
    BudgetExhausted { budget: u64 },

    #[error("trace never reached y = 1")]
    NeverReachedOne,

    #[error("invalid range [{lo}, {hi})")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("a and b are both zero")]
    DegenerateEquation,

    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_undecided(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}
