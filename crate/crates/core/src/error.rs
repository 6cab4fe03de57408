use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("truncation ladder did not converge (last relative change {last_change:e} at size {size})")]
    TruncationNotConverged { size: usize, last_change: f64 },
    #[error("eigenvalue tracking ambiguous between levels {a} and {b} at E = {at}")]
    TrackingAmbiguous { a: usize, b: usize, at: String },
    #[error("branch cut crossed at {0}")]
    BranchCut(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("Newton iteration did not converge after {iterations} steps (|F| = {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("near a pole: {0}")]
    NearPole(String),
}

pub type Result<T> = std::result::Result<T, Error>;
