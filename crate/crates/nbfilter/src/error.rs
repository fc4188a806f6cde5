use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::Label;

/// Errors produced by corpus loading, training, and experiment runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("empty corpus: no message files under {0}")]
    EmptyCorpus(PathBuf),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("training data contains no {0} messages")]
    MissingClass(Label),
    #[error("fold {fold}: training split contains no {class} messages")]
    FoldMissingClass { fold: usize, class: Label },
    #[error("vector length {got} does not match attribute count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("model file parse error at line {line}: {message}")]
    ModelParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
