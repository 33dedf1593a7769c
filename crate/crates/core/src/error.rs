use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("equal block sizes n = m = {0}: the adjoint map onto derivations is not an isomorphism")]
    EqualBlocks(usize),
    #[error("block sizes ({n}|{m}) too small: need n + m >= 2")]
    TooSmall { n: usize, m: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("interior product of a 0-form")]
    DegreeUnderflow,
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("odd derivation has no body image")]
    OddDerivation,
    #[error("basis is not body-adapted: {0}")]
    NotAdapted(String),
    #[error("degree {requested} exceeds the configured cap {cap}")]
    DegreeCapExceeded { requested: usize, cap: usize },
    #[error("not a graded symplectic structure: {0}")]
    NotSymplectic(String),
    #[error("invalid connection: {0}")]
    InvalidConnection(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("parse error: {0}")]
    Parse(String),
}
