//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by group, linear-algebra, cohomology and certificate
/// operations. Cloneable so results can be cached.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Input does not describe a permutation group (bad images, degree 0, ...).
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    /// An operation hit its configured size cap. Carries the group order when known.
    #[error("group too large: order {order} exceeds cap {cap}; route the computation through a sylow or semidirect strategy instead")]
    TooLarge { order: u64, cap: u64 },

    /// A permutation was expected to lie in a group but does not.
    #[error("element is not a member of the group")]
    NotMember,

    /// A claimed automorphism fails the homomorphism or bijectivity check.
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    /// A 2-cochain fails the cocycle identity.
    #[error("not a cocycle: identity fails at triple ({0}, {1}, {2})")]
    NotCocycle(u32, u32, u32),

    /// An element expected to be central is not.
    #[error("element is not central")]
    NotCentral,

    /// A structural hypothesis of a formula is violated (e.g. non-perfect normal factor).
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// quotient_presentation relations are not inside the span of the generators.
    #[error("inconsistent presentation: relation {0} is outside the generator span")]
    InconsistentPresentation(usize),

    /// Input is syntactically valid but outside the supported range.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Linear system has no solution (certified).
    #[error("no solution modulo {0}")]
    NoSolution(i64),

    /// Malformed JSON or schema violation in an external file.
    #[error("json: {0}")]
    Json(String),

    /// Filesystem error surfaced by cache or report writing.
    #[error("io: {0}")]
    Io(String),

    /// Certificate replay found a mismatch.
    #[error("replay failed: {0}")]
    ReplayFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
