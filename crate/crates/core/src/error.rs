use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("points are affinely dependent")]
    AffinelyDependent,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("region is infeasible")]
    Infeasible,
    #[error("region is unbounded")]
    Unbounded,
    #[error("polytope is not a prismatoid")]
    NotPrismatoid,
    #[error("linear functional ties on vertices {0} and {1}")]
    NonGenericFunctional(usize, usize),
    #[error("deck is rank deficient: {0}")]
    DegenerateDeck(String),
    #[error("safety fuse tripped: {0}")]
    FuseTripped(String),
    #[error("no hop region found after {0} attempts")]
    NoRegionFound(usize),
    #[error("fitness vector lacks metric `{0}`")]
    MissingMetric(&'static str),
    #[error("too many vertices: {0} (limit {limit})", limit = crate::MAX_VERTICES)]
    TooManyVertices(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
