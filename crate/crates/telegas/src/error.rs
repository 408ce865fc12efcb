//! Crate-wide error type.

/// Errors produced by validation, domain checks, and numerical budgets.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A constructor argument violates its documented constraint.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative computation ran out of budget; `partial` is the best
    /// estimate available when the budget was hit.
    #[error("budget exceeded in {context}: best estimate {partial}")]
    BudgetExceeded { context: String, partial: f64 },

    /// The result would overflow the floating-point range; callers should
    /// switch to the log-domain variant where one exists.
    #[error("range error: {0}")]
    Range(String),

    /// A statistical procedure received a sample it cannot act on.
    #[error("insufficient sample: {0}")]
    InsufficientSample(String),
}

impl Error {
    /// Best partial estimate carried by a budget error, if any.
    pub fn partial_value(&self) -> Option<f64> {
        match self {
            Error::BudgetExceeded { partial, .. } => Some(*partial),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
