use thiserror::Error;

/// Errors raised by rule construction, Nyström assembly and the iterative solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    InvalidParameter(String),

    #[error("recurrence table holds {available} coefficients, {required} required")]
    InsufficientTable { required: usize, available: usize },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("space weight vanishes at node x = {0}")]
    WeightVanishes(f64),

    #[error("singular matrix: zero pivot in column {0}")]
    Singular(usize),

    #[error("point y = {0} lies outside the domain of the measure")]
    OutOfDomain(f64),

    #[error("nodes coincide near x = {0}")]
    NodeCoincidence(f64),

    #[error("operation requires a bounded domain")]
    UnboundedDomain,

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
