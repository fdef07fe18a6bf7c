use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("row {row} references unknown variable index {var}")]
    UnknownVariable { row: usize, var: usize },
    #[error("variable {var} has invalid bounds [{lower}, {upper}]")]
    InvalidBounds { var: String, lower: f64, upper: f64 },
    #[error("variable {0} is free and appears in no constraint")]
    Unconstrained(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("MPS line {line}: {msg}")]
    Mps { line: usize, msg: String },
}
