use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("non-generic valuation collision: {0}")]
    Collision(String),
    #[error("non-integral multiplicity: {0}")]
    Multiplicity(String),
    #[error("step budget exceeded after {0} steps")]
    Budget(usize),
    #[error("singular matrix")]
    Singular,
    #[error("level {0} is too small: {1}")]
    Level(u32, String),
    #[error("vertex outside the complex: {0}")]
    MissingVertex(String),
    #[error("non-integral coefficient: {0}")]
    NonIntegral(String),
    #[error("opd axiom failure: {0}")]
    Axiom(String),
    #[error("sum does not terminate: {0}")]
    NotNilpotent(String),
    #[error("{0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
