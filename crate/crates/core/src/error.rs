//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum CoreError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pattern mismatch: source {src} and destination {dst} differ in support")]
    PatternMismatch { src: String, dst: String },
    #[error("invalid noise scale {0}; expected a value in (0, 0.5)")]
    InvalidNoiseScale(f64),
    #[error("non-physical table: {0}")]
    NonPhysical(String),
    #[error("twirl residual {residual:.3e} above tolerance {tol:.3e}")]
    TwirlResidual { residual: f64, tol: f64 },
    #[error("path condition violated at step {step}: {detail}")]
    PathCondition { step: usize, detail: String },
    #[error("chain is not learnable: cut-part norm {0:.3e}")]
    NotLearnable(f64),
    #[error("foreign edge label: {0}")]
    ForeignEdge(String),
    #[error("stabilizers do not pairwise commute: {0} and {1}")]
    NonCommutingStabilizers(String, String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("estimation failed: {0}")]
    EstimationFailed(String),
    #[error("zero-trace branch: outcome {0} has probability 0")]
    ZeroTraceBranch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
