use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Verification failures (an identity that does not hold, a splint that is
/// not a disjoint union) are reported as data, not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("unknown Lie algebra family `{0}` (expected one of A, B, C, D, E, F, G)")]
    UnknownFamily(String),

    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: char, rank: usize },

    #[error("total rank {0} exceeds the supported maximum of 8")]
    RankTooLarge(usize),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("weight {0} is not integral")]
    NotIntegral(String),

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("Weyl group of order {order} is too large to enumerate (limit {limit})")]
    WeylGroupTooLarge { order: u64, limit: u64 },

    #[error("vector {0} is not a root of the ambient system")]
    NotARoot(String),

    #[error("subset is not closed: {0}")]
    NotClosed(String),

    #[error("Cartan matrix of the realized simple roots does not match type {0}")]
    CartanMismatch(String),

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("level violation: {0}")]
    LevelViolation(String),

    #[error("matrix is not unitriangular at ({row}, {col})")]
    NotUnitriangular { row: usize, col: usize },

    #[error("unknown splint `{name}`; available: {available}")]
    UnknownSplint { name: String, available: String },

    #[error("invalid splint: {0}")]
    InvalidSplint(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An exact computation produced a result that cannot be right
    /// (non-zero remainder, negative branching coefficient, ...).
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, LieError>;
