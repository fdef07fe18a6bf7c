use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CoreError {
    #[error("invalid {what}: {msg}")]
    Invalid { what: &'static str, msg: String },
    #[error("{profile}: shares sum to {sum} (off by {delta:+e})")]
    ShareClosure { profile: String, sum: f64, delta: f64 },
    #[error("no multiplier row for category {category:?} in profile {profile}")]
    UnmappedCategory { profile: String, category: String },
    #[error("O&M schedule is non-positive in year 1 ({value}); slope too steep for a {life}-year life")]
    NonPositiveOm { value: f64, life: u32 },
    #[error("empty sample set")]
    EmptySamples,
    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },
    #[error("cost weight {0} < 1 requires a fixed total solar level (benefit-only objective is unbounded)")]
    UnboundedBenefit(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("solver returned {status:?}: {detail}")]
    Solver { status: solarsite_lp::LpStatus, detail: String },
    #[error(transparent)]
    Lp(#[from] solarsite_lp::LpError),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn invalid<T>(what: &'static str, msg: impl Into<String>) -> Result<T> {
    Err(CoreError::Invalid { what, msg: msg.into() })
}
