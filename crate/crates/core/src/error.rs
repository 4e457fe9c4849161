use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("direction must be non-zero")]
    ZeroDirection,

    #[error("point is not interior to the body (gauge {gauge:.6e})")]
    XNotInterior { gauge: f64 },

    #[error("body is not symmetric about the origin")]
    NotSymmetric,

    #[error("origin is not an interior point of the body")]
    NotOriginCentered,

    #[error("dilation factor must be positive, got {0}")]
    NonPositiveFactor(f64),

    #[error("ellipse is not contained in the body (worst violation {0:.3e})")]
    EllipseNotContained(f64),

    #[error("directional profile has a non-positive or non-finite radius")]
    DegenerateProfile,

    #[error("|p(x)| is too close to 1 for the Bernstein ratio")]
    PAtUnitValue,

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
