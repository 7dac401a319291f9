use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds size cap {cap}")]
    SizeCapExceeded { dim: usize, cap: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid arity: {0}")]
    InvalidArity(String),

    #[error("index {index} out of range (limit {limit})")]
    Index { index: usize, limit: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("not a density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("channel is not trace preserving on its domain (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("POVM completeness residual {residual:e} exceeds tolerance {tol:e}; try more measurement directions")]
    IncompletePovm { residual: f64, tol: f64 },

    #[error("solver did not converge (exploitability {exploitability:e})")]
    NonConvergence { exploitability: f64 },

    #[error("{what} hit the iteration cap of {cap}")]
    IterationLimit { what: &'static str, cap: usize },

    #[error("strategy action is not a group: {0}")]
    NotAGroup(String),

    #[error("payoff covariance identity violated (deviation {deviation:e})")]
    CovarianceViolation { deviation: f64 },
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeCapExceeded { .. } => "size_cap_exceeded",
            Error::Shape(_) => "shape",
            Error::InvalidArity(_) => "invalid_arity",
            Error::Index { .. } => "index",
            Error::NotNormalized { .. } => "not_normalized",
            Error::InvalidDensity(_) => "invalid_density",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotTracePreserving { .. } => "not_trace_preserving",
            Error::IncompletePovm { .. } => "incomplete_povm",
            Error::NonConvergence { .. } => "non_convergence",
            Error::IterationLimit { .. } => "iteration_limit",
            Error::NotAGroup(_) => "not_a_group",
            Error::CovarianceViolation { .. } => "covariance_violation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
