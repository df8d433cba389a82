use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside an operation's domain.
    #[error("{op}: invalid input: {msg}")]
    InvalidInput { op: &'static str, msg: String },

    /// A kernel specification that cannot produce an admissible operator.
    #[error("{op}: invalid kernel spec: {msg}")]
    InvalidSpec { op: &'static str, msg: String },

    /// The Cantor embedding found a node with no Ω-free child.
    #[error("{op}: construction failure at level {level}, index {index}: {msg}")]
    Construction {
        op: &'static str,
        level: usize,
        index: u64,
        msg: String,
    },

    #[error("{op}: resource limit: {msg}")]
    Resource { op: &'static str, msg: String },

    #[error("{op}: no convergence after {iterations} iterations (relative change {residual:e})")]
    NoConvergence {
        op: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("{op}: reduction did not terminate after {steps} steps")]
    Reduction { op: &'static str, steps: usize },

    /// No hitting time was found within the configured window.
    #[error("{op}: witness failure: {msg}")]
    Witness { op: &'static str, msg: String },
}

impl Error {
    pub(crate) fn invalid(op: &'static str, msg: impl Into<String>) -> Self {
        Error::InvalidInput {
            op,
            msg: msg.into(),
        }
    }

    /// The operation that raised the error.
    pub fn op(&self) -> &'static str {
        match self {
            Error::InvalidInput { op, .. }
            | Error::InvalidSpec { op, .. }
            | Error::Construction { op, .. }
            | Error::Resource { op, .. }
            | Error::NoConvergence { op, .. }
            | Error::Reduction { op, .. }
            | Error::Witness { op, .. } => op,
        }
    }

    /// True for errors caused by bad arguments rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidInput { .. } | Error::InvalidSpec { .. })
    }
}
