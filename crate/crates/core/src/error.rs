use thiserror::Error;

/// Errors raised by the numerical and analytic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Fock dimension {dim}: at least 2 levels are required")]
    InvalidDimension { dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Fock cutoff {dim} is insufficient for {what}{}", needed.map(|n| format!(" (needs dim >= {n})")).unwrap_or_default())]
    CutoffInsufficient {
        dim: usize,
        needed: Option<usize>,
        what: String,
    },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    /// A perturbative or asymptotic formula was used outside its regime.
    /// `condition` names the inequality that failed, e.g. `"λ < 1"`.
    #[error("out of regime: requires {condition} (got {actual})")]
    OutOfRegime { condition: String, actual: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state is not normalized: {0}")]
    NotNormalized(String),

    #[error("quadrature grid too coarse: step halving still changes the result by {change:e}")]
    GridTooCoarse { change: f64 },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn regime(condition: impl Into<String>, actual: impl std::fmt::Display) -> Self {
        Error::OutOfRegime {
            condition: condition.into(),
            actual: actual.to_string(),
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
