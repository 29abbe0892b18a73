use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable space mismatch: {left:?} vs {right:?}")]
    SpaceMismatch { left: Vec<String>, right: Vec<String> },

    #[error("enumeration of {num_vars} variables to degree {max_degree} overflows the platform integer")]
    SizeOverflow { num_vars: usize, max_degree: u32 },

    #[error("formal convergence: {0}")]
    FormalConvergence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("tail of {0} has no summable bound")]
    Tail(String),

    #[error("term budget exceeded: {terms} terms > limit {limit}")]
    Budget { terms: usize, limit: usize },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("no weight scheme certified: best bound {best_bound} at rho {best_rho}")]
    NoWeightScheme { best_bound: f64, best_rho: f64 },

    #[error("point outside chart domain: {0}")]
    ChartDomain(String),

    #[error("quadrature unsupported: {0}")]
    Quadrature(String),

    #[error("non-finite integrand value at {0:?}")]
    NonFinite(Vec<f64>),

    #[error("invalid input in field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { field: field.into(), message: message.into() }
    }
}
