use std::path::PathBuf;

use thiserror::Error;

use crate::pos::Pos;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing lexical database file `{name}` in {}", dir.display())]
    MissingFile { dir: PathBuf, name: String },

    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },

    #[error("line {line}: {kind}")]
    Record { line: usize, kind: RecordErrorKind },

    #[error("({lemma}, {pos}) is not in the vocabulary")]
    NotInVocabulary { lemma: String, pos: Pos },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("curation directive at line {line} (`{directive}`): {message}")]
    Directive {
        line: usize,
        directive: String,
        message: String,
    },

    #[error("relation `{id}` is discarded and cannot enter a graph")]
    DiscardedRelation { id: String },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("empty sample")]
    EmptySample,

    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),
}

/// Per-line corpus problems; reported with their line number by [`Error::Record`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordErrorKind {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown sense `{0}`")]
    UnknownSense(String),
    #[error("unknown relation type `{0}`")]
    UnknownType(String),
    #[error("empty argument ({0})")]
    EmptyArgument(&'static str),
    #[error("empty connective")]
    EmptyConnective,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
