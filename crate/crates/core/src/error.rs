use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis is singular or numerically degenerate")]
    SingularBasis,
    #[error("enumeration exceeded the node budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("width {width} is below the sampler threshold {threshold}")]
    WidthTooSmall { width: f64, threshold: f64 },
    #[error("combiner needs {required} input points but got {got}")]
    InsufficientInput { required: usize, got: usize },
    #[error("combiner starved: produced {achieved} of {target} outputs")]
    Starved { achieved: usize, target: usize },
    #[error("gradient ascent did not converge within {steps} steps")]
    NotConverged { steps: usize },
    #[error("repetition budget exhausted after {repetitions} targets")]
    BudgetExhausted { repetitions: usize },
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("no feasible parameter: {0}")]
    Infeasible(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
