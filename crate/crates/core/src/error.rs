use thiserror::Error;

/// Errors raised by the exact-arithmetic kernels and everything built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of an operation (wrong shape, zero polynomial, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A quadratic form or pairing turned out to be singular.
    #[error("degenerate form: {0}")]
    Degenerate(String),
    /// The working p-adic precision cannot certify the requested answer.
    #[error("precision error: {0}")]
    Precision(String),
    /// An algorithm declined to run on its input; carries a diagnostic.
    #[error("refused: {0}")]
    Refusal(String),
    /// A structure failed validation; `axiom` names the violated condition.
    #[error("rejected ({axiom}): {detail}")]
    Rejected { axiom: String, detail: String },
    /// A verification identity did not hold.
    #[error("structural failure: {0}")]
    Structural(String),
    /// Two independent routes to the same invariant disagreed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// The operation is deliberately not supported for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn rejected(axiom: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Rejected {
            axiom: axiom.into(),
            detail: detail.into(),
        }
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
