//! Error type shared by the whole pipeline.

use std::path::Path;

/// Errors from corpus processing, artifact I/O, similarity queries, and evaluation.
///
/// `Parse` line numbers are 1-based physical line numbers, counting the header
/// line of the file in question.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed content in an input file.
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty vocabulary: {0}")]
    EmptyVocabulary(String),

    #[error("word not in vocabulary: '{0}'")]
    OovWord(String),

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// Paired artifacts were built over different vocabularies.
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }
}
