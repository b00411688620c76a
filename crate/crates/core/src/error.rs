//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid complex `{name}`: {reason}")]
    InvalidComplex { name: String, reason: String },

    #[error("unknown cell id `{0}`")]
    UnknownCell(String),

    #[error("`{0}` is not a subcomplex: boundary of `{1}` leaves the cell set")]
    NotBoundaryClosed(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cocycle condition violated on 2-cell `{cell}` (component {component})")]
    CocycleViolation { cell: String, component: usize },

    #[error("cocycle value for `{edge}` has {got} components, expected {expected}")]
    CocycleRankMismatch {
        edge: String,
        got: usize,
        expected: usize,
    },

    #[error("path is not contiguous at step {step}: `{edge}` does not start where the previous edge ended")]
    NonContiguousPath { step: usize, edge: String },

    #[error(
        "1-cell `{0}` does not carry head/tail data (boundary must list one +1 and one -1 entry)"
    )]
    MissingEndpoints(String),

    #[error("2-cell `{0}` has no unit attaching word; twisting requires unit-coefficient boundary entries in attaching order")]
    MissingAttachingWord(String),

    #[error("monodromy matrix for `{edge}` is not unimodular (det = {det})")]
    NotUnimodular { edge: String, det: String },

    #[error("monodromy is not flat: holonomy around 2-cell `{0}` is not the identity")]
    NotFlat(String),

    #[error(
        "evaluation point has a zero coordinate (index {0}); Laurent entries are undefined at 0"
    )]
    ZeroEvaluationPoint(usize),

    #[error("evaluation point has {got} coordinates, expected {expected}")]
    EvaluationRankMismatch { got: usize, expected: usize },

    #[error("evaluation trials disagree after one retry; rerun with a different seed")]
    TrialsDisagree,

    #[error("invalid gluing data: {0}")]
    InvalidGluing(String),

    #[error("gluing stage {0} out of range 1..={1}")]
    StageOutOfRange(usize, usize),

    #[error("chain refers to `{cell}` which is not a cell of stage {stage}")]
    ChainOutsideStage { cell: String, stage: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("invalid flow: {0}")]
    InvalidFlow(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cellular map is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
