use thiserror::Error;

/// Raised when an objective call is attempted after the evaluation budget is spent.
///
/// Optimizers treat this as the normal termination signal rather than a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("evaluation budget of {max} exhausted")]
pub struct BudgetExhausted {
    pub max: u64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("budget exhausted: {0}")]
    Budget(#[from] BudgetExhausted),

    #[error("empty population")]
    EmptyPopulation,

    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    DimensionMismatch {
        expected: usize,
        actual: usize,
        context: &'static str,
    },

    #[error("invalid bounds in dimension {dim}: lower {lower} must be below upper {upper}")]
    InvalidBounds { dim: usize, lower: f64, upper: f64 },

    #[error("invalid configuration: {key}: {message}")]
    Config { key: String, message: String },

    #[error("unknown base function `{0}`")]
    UnknownBase(String),

    #[error("unknown benchmark function `{0}`")]
    UnknownFunction(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("degenerate moving-vector directions: {0}")]
    DegenerateDirections(String),

    #[error("literal weighted averaging requires strictly positive elite fitness, found {0}")]
    NonPositiveFitness(f64),

    #[error("statistics: {0}")]
    Stats(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
