use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QpbError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: {0}")]
    Pole(String),
    #[error("not a unit Gaussian rational: {0}")]
    NotUnit(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degree bound {bound} exceeded: {what}")]
    Truncation { bound: usize, what: String },
    #[error("operation not available for calculus {calculus}: {what}")]
    Unsupported { calculus: String, what: String },
    #[error("element outside the constructed complement: {0}")]
    OutOfComplement(String),
    #[error("element not in the ideal: {0}")]
    NotInIdeal(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("chart mismatch: {0} vs {1}")]
    ChartMismatch(usize, usize),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, QpbError>;
