use thiserror::Error;

/// Errors raised by the library. Hypothesis failures are inputs that violate a
/// stated precondition; `ConstructionFailed` signals an internal bug (a
/// postcondition of a constructive procedure did not verify).
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {edge} references vertex {vertex} which is not in the graph")]
    DanglingEndpoint { edge: u32, vertex: u32 },
    #[error("duplicate id {0}")]
    DuplicateId(u32),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("construction failed (internal bug): {0}")]
    ConstructionFailed(String),
    #[error("region data does not match traced circuits: {0}")]
    RegionMismatch(String),
    #[error("arc {0} is boundary-parallel")]
    BoundaryParallelArc(u32),
    #[error("malformed ribbon structure: {0}")]
    MalformedRibbon(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not in SL2 (determinant != 1)")]
    NotSl2,
    #[error("operands belong to different valued fields")]
    FieldMismatch,
    #[error("matrix entries do not have the arc-stabilizer shape: {0}")]
    NotInStabilizer(String),
    #[error("framing is degenerate (not a basis)")]
    DegenerateFraming,
    #[error("norm data is degenerate: {0}")]
    DegenerateNorm(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("instance size exceeds cap: {0}")]
    CapExceeded(String),
    #[error("comparison inconclusive at maximum precision: {0}")]
    Inconclusive(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
