use num_bigint::BigUint;
use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by how callers should react: input errors
/// (`Parse`, `InvalidInput`), resource errors (`BudgetExceeded`,
/// `SampleCapExceeded`, `GuaranteedInfeasible`) and consistency errors
/// (`OracleInconsistency`, `Internal`) that indicate a broken oracle or
/// a bug rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    /// A text document failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The enumeration budget was exhausted before the operation finished.
    /// No partial result is returned.
    #[error("enumeration budget exceeded: would scan {planned} subsets but budget is {budget}")]
    BudgetExceeded { planned: u128, budget: u64 },

    /// Adaptive sampling hit its sample cap before reaching the success
    /// target.
    #[error("sample cap exceeded: drew {drawn} samples ({successes} successes, target {target})")]
    SampleCapExceeded {
        drawn: u64,
        successes: u64,
        target: u64,
    },

    /// Guaranteed-mode sampling refuses to run because the required
    /// sample count exceeds the configured cap.
    #[error("guaranteed mode requires {required} samples, above the cap of {cap}; pass force to run anyway")]
    GuaranteedInfeasible { required: BigUint, cap: u64 },

    /// An injected counting oracle returned values inconsistent with the
    /// reduction's integrality requirements.
    #[error("oracle inconsistency: {0}")]
    OracleInconsistency(String),

    /// An internal identity that should hold unconditionally failed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
