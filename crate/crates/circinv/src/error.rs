use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("polynomial root {0:.12} lies within 1e-8 of the unit circle")]
    RootOnCircle(f64),
    #[error("regular part is not positive on the circle")]
    NotPositive,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("matrix is not positive definite (order {order}, reflection modulus {modulus})")]
    NotPositiveDefinite { order: usize, modulus: f64 },
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("index ({0}, {1}) out of range")]
    IndexOutOfRange(usize, usize),
    #[error("truncation too short: tail {0:e}")]
    TruncationTooShort(f64),
    #[error("truncation too small: doubling changed the result by {0:e}")]
    TruncationTooSmall(f64),
    #[error("Neumann series diverging at term {0}")]
    SeriesDiverging(usize),
    #[error("pole at index {0}")]
    PoleAtIndex(i64),
    #[error("kernel evaluated on the diagonal")]
    DiagonalSingularity,
    #[error("the two zeros coincide")]
    DegenerateZeros,
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
