use std::path::PathBuf;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("value {0} is not a sign in {{-1, +1}}")]
    NotASign(f64),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} = {found} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        found: usize,
        limit: usize,
    },

    #[error("dependency coefficients are undefined at chain step {0}")]
    UndefinedStep(usize),

    #[error("chain step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("model/data schema mismatch: {0}")]
    SchemaMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
