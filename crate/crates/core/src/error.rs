//! Error type shared by all toolkit modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on caller-supplied parameters failed.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An instance file violated the schema or an instance invariant.
    /// `field` names the offending JSON field (with index where relevant).
    #[error("parse error in field `{field}`: {detail}")]
    Parse { field: String, detail: String },

    /// Operator/state dimensions do not match.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A configurable size guard was exceeded.
    #[error("{what} = {got} exceeds the guard {limit}; {advice}")]
    Guard {
        what: &'static str,
        got: usize,
        limit: usize,
        advice: &'static str,
    },

    /// The iterative eigensolver did not converge within its iteration cap.
    #[error("eigensolver did not converge in sector {sector} (residual {residual:.3e} after {iterations} iterations)")]
    NonConvergence {
        sector: usize,
        residual: f64,
        iterations: usize,
    },

    /// The instance has no excited level (m = 0) or a gap below the exclusion
    /// threshold, so 1/δ² is undefined.
    #[error("gap is zero or below the exclusion threshold ({0:.3e}); instance excluded from statistics")]
    ZeroGap(f64),

    /// RK4 norm drift exceeded the accepted bound; rerun with more steps.
    #[error("norm drift {drift:.3e} after {steps} steps exceeds 1e-4; increase the step count")]
    NormDrift { drift: f64, steps: usize },

    /// The initial state of a holonomy prediction lies outside the ground
    /// space, violating the adiabatic-theorem hypothesis.
    #[error("state lies outside the ground space (projection residual {residual:.3e})")]
    OutsideGroundSpace { residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON syntax error at line {line}, column {column}: {detail}")]
    JsonSyntax {
        line: usize,
        column: usize,
        detail: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            detail: detail.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::JsonSyntax {
            line: e.line(),
            column: e.column(),
            detail: e.to_string(),
        }
    }
}
