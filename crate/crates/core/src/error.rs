use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeP(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid eta: {0}")]
    InvalidEta(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("vertex meets the subgeometry")]
    VertexMeetsSubgeometry,
    #[error("vertex meets the axis")]
    VertexMeetsAxis,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("parse error at {at}: {msg}")]
    Parse { at: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
