use thiserror::Error;

/// Errors produced by run construction, weight assignment and the error
/// estimation methods.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no runs")]
    NoRuns,
    #[error("incompatible runs: {0}")]
    IncompatibleRuns(String),
    #[error("broken replacement chain at {index}")]
    BrokenReplacementChain { index: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("log-volumes not strictly decreasing at {index}")]
    NonMonotoneVolumes { index: usize },
    #[error("empty posterior")]
    EmptyPosterior,
    #[error("unsupported estimand {estimand} for {context}")]
    UnsupportedEstimand { estimand: String, context: String },
    #[error("estimand references missing component {component}")]
    MissingComponent { component: usize },
    #[error("no exact volumes")]
    NoExactVolumes,
    #[error("no closed form")]
    NoClosedForm,
    #[error("insufficient replications: {got} < {min}")]
    InsufficientReplications { got: usize, min: usize },
    #[error("missing problem metadata: {0}")]
    MissingProblem(String),
    #[error("run file version mismatch: found {found}, supported {supported}")]
    VersionMismatch { found: u32, supported: u32 },
    #[error("malformed run file: {0}")]
    Format(String),
    #[error("run failed validation: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
