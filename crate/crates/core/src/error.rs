use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library.
///
/// Mathematical verdicts ("not semiprime", "cocycle law fails") are never
/// errors; they live in reports. These variants cover malformed input,
/// unmet preconditions, and internal invariant violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("value {value} does not belong to ring {ring}")]
    KindMismatch { ring: String, value: String },

    #[error("automorphism {spec} is not applicable to ring {ring}")]
    IncompatibleAutomorphism { spec: String, ring: String },

    #[error("ring {0} is infinite")]
    InfiniteRing(String),

    #[error("ring {0} is not a domain")]
    NotDomain(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("datum is not pre-crystalline: {0}")]
    NotPreCrystalline(String),

    #[error("datum is not crystalline: {0}")]
    NotCrystalline(String),

    #[error("element does not belong to this graded ring: {0}")]
    DatumMismatch(String),

    #[error("zero is not allowed here: {0}")]
    ZeroInput(String),

    #[error("|G| = {0} not invertible in the coefficient ring")]
    OrderNotInvertible(usize),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("subspace is not stable under the action of u_{0}")]
    NotStable(usize),

    #[error("no R-linear projection onto the submodule exists")]
    NoProjection,

    #[error("size cap exceeded: {what} is {size}, limit {limit}")]
    SizeCap {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors signalling a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
