use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Ill-formed setup: mismatched shapes, invalid schemes, incompatible bodies.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A brute-force enumeration would exceed its cap.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("function `{function}` is not inflationary: {detail}")]
    NotInflationary { function: String, detail: String },

    #[error("function `{function}` is not monotonic: {detail}")]
    NotMonotonic { function: String, detail: String },

    #[error("closure of `{function}` did not reach a local fixpoint within {cap} applications")]
    ClosureCap { function: String, cap: usize },

    #[error("combined coefficient of variable x{variable} is not an integer ({value})")]
    NonIntegralCut { variable: usize, value: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
