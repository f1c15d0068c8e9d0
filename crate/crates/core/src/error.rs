use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("spectral set has no quadrature nodes outside (-{lambda_min}, {lambda_min})")]
    EmptyGrid { lambda_min: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("no slice stored for lambda = {lambda}")]
    MissingSlice { lambda: f64 },

    #[error("evaluation requires the slice at lambda = 0 (from lambda = {lambda})")]
    Singularity { lambda: f64 },

    #[error("painless criterion not applicable: {0}")]
    NotApplicable(String),

    #[error("spectral pieces overlap")]
    Overlap,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
