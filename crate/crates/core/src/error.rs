use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the bandit model, subroutines and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("cannot select {k} arms out of {available}")]
    NotEnoughArms { k: usize, available: usize },
    #[error("rank m = {m} is out of range for {n} arms")]
    RankOutOfRange { m: usize, n: usize },
    #[error("budget {budget} is smaller than the {arms} samples needed to initialise")]
    BudgetTooSmall { budget: u64, arms: usize },
    #[error("arm {0} is unknown to the ground truth")]
    UnknownArm(u64),
    #[error("need at least {needed} trial verdicts, got {got}")]
    TooFewTrials { needed: usize, got: usize },
    #[error("operation `{op}` is not supported by a {population} population")]
    Unsupported {
        op: &'static str,
        population: &'static str,
    },
    #[error("problem spec: {0}")]
    Spec(String),
    #[error("sample accounting mismatch: algorithm reported {reported}, source counted {counted}")]
    Accounting { reported: u64, counted: u64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

/// Checks `value ∈ (0, 1)`.
pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, value, "must lie in (0, 1)"))
    }
}

/// Checks `value ∈ (0, upper)`.
pub(crate) fn check_open(name: &'static str, value: f64, upper: f64) -> Result<()> {
    if value > 0.0 && value < upper {
        Ok(())
    } else {
        Err(Error::param(name, value, "out of range"))
    }
}
