use alloc::string::String;

/// Errors raised by the classification core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix dimension {0} is even; an odd dimension 2n+1 is required")]
    EvenDimension(usize),
    #[error("matrix dimension {0} is too small; at least 3 is required")]
    DimensionTooSmall(usize),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("invalid interval: lower end exceeds upper end")]
    InvalidInterval,
    #[error("interval does not isolate exactly one root (count {0})")]
    NotIsolating(usize),
    #[error("lattice basis vectors are linearly dependent")]
    DependentBasis,
    #[error("lattice basis is malformed: {0}")]
    MalformedBasis(String),
    #[error("reduction parameter must satisfy 1/4 < delta < 1")]
    BadDelta,
    #[error("kernel is empty; no dependence witness exists")]
    EmptyKernel,
    #[error("minimal polynomial search exhausted {bits} bits of precision")]
    PrecisionExhausted { bits: u32 },
    #[error("matrix is not admissible: {0}")]
    NotAdmissible(String),
    #[error("numeric iteration failed to converge: {0}")]
    NoConvergence(String),
    #[error("point is not in the upper half-plane")]
    OutsideHalfPlane,
    #[error("invalid block split: {0}")]
    InvalidSplit(String),
    #[error("polynomial parse error: {0}")]
    PolyParse(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;
