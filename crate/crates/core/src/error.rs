use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(String),

    #[error("grid of length {length} is too short for an order-{order} difference")]
    InsufficientGrid { length: usize, order: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),

    #[error("singular linear system: pivot {pivot:e} in column {column}")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("no convergence after {iterations} iterations (last delta {last_delta:e})")]
    NonConvergence { iterations: usize, last_delta: f64 },

    #[error("non-finite value: {0}")]
    NonfiniteValue(String),

    #[error("unstable limit: {0}")]
    UnstableLimit(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
