use std::fmt;

use crate::scalar::Magnitude;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input could not be parsed into a well-formed spec or scalar.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A normal matrix failed every classification condition. Mathematically
    /// impossible, so this always points at a bug or a tolerance that is too loose.
    #[error("theorem violation: {0}")]
    TheoremViolation(Box<Diagnostic>),

    #[error("enumeration needs {required} instances but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }
}

/// Everything needed to judge how close a normal-but-unclassified spec came
/// to satisfying the type conditions.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub message: String,
    pub max_residual: Magnitude,
    pub worst_pair: Option<(usize, usize)>,
    pub oracle_norm: Magnitude,
    pub agrees: bool,
    /// Largest |numer[k] - c * denom[k]| for the best candidate of each condition,
    /// in the order type I, type II (or the four real labels).
    pub near_misses: Vec<NearMiss>,
}

#[derive(Debug, Clone)]
pub struct NearMiss {
    pub condition: String,
    /// Candidate witness from the first usable ratio, as (re, im).
    pub candidate: Option<(f64, f64)>,
    pub max_deviation: f64,
    pub unit_deviation: f64,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (max residual {}", self.message, self.max_residual)?;
        if let Some((m, n)) = self.worst_pair {
            write!(f, " at ({m}, {n})")?;
        }
        write!(f, ", oracle {}", self.oracle_norm)?;
        for miss in &self.near_misses {
            write!(
                f,
                "; {}: deviation {:.3e}, |c|^2-1 = {:.3e}",
                miss.condition, miss.max_deviation, miss.unit_deviation
            )?;
        }
        write!(f, ")")
    }
}
