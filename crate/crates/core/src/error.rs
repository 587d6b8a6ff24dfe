use thiserror::Error;

/// Errors raised by the simulation and analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range [{min}, {max}]")]
    OutOfRange { index: i64, min: i64, max: i64 },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("degenerate block at k = {k}: lowest levels split by {gap:e}")]
    DegenerateBlock { k: f64, gap: f64 },

    #[error("gapless block at k = {k}: omega = {omega:e}")]
    GaplessBlock { k: f64, omega: f64 },

    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),

    #[error("matrix is not skew-symmetric (antisymmetrization correction {0:e})")]
    NotSkew(f64),

    #[error("two-site state not positive: eigenvalue {0:e}")]
    PositivityViolation(f64),

    #[error("insufficient data: {found} usable points, need {needed}")]
    InsufficientData { found: usize, needed: usize },

    #[error("every profile value lies below the noise floor {0:e}")]
    AllBelowFloor(f64),

    #[error("inconclusive scaling verdict")]
    Inconclusive,

    #[error("finite-size sweep mixes decay models (size {0} is not algebraic)")]
    MixedModels(usize),

    #[error("system too large for exact diagonalization: N = {0} > {1}")]
    TooLarge(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
