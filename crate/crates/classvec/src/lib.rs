//! Joint word and class vector embeddings for document classification.
//!
//! This crate trains skip-gram word embeddings together with one embedding
//! row per document class, in the same vector space. Class vectors are
//! learned by treating the class id as a pseudo-token that co-occurs with
//! every word of every document in that class. The resulting class-word
//! geometry drives three classifiers (CV Score, CV-LR, norm CV-LR), an
//! information-theoretic vocabulary analysis, and the usual bag-of-words
//! baselines for comparison.
//!
//! The typical flow:
//!
//! 1. [`corpus::load_labeled_corpus`] reads `<label>\t<text>` lines.
//! 2. [`phrase`] optionally rewrites frequent bigrams as single tokens.
//! 3. [`embed::EmbeddingModel`] trains word and class vectors with negative
//!    sampling and/or hierarchical softmax.
//! 4. [`scoring`] turns class-word similarities into predictions and feature
//!    maps; [`classify`] fits logistic regression over those features;
//!    [`baselines`] provides bag-of-words and Naive Bayes comparisons.
//! 5. [`infosel`] computes realized/expected information per word.
//!
//! See the `examples/` directory for a runnable walk-through of each
//! capability, and the `classvec` binary for the command-line pipeline.

pub mod baselines;
pub mod classify;
pub mod corpus;
pub mod embed;
pub mod infosel;
pub mod model_io;
pub mod phrase;
pub mod scoring;
pub mod sparse;
pub mod synth;

use std::io;
use std::path::PathBuf;

pub use corpus::{Document, LabeledCorpus, Vocabulary};
pub use embed::{EmbeddingModel, TrainConfig};
pub use scoring::FeatureMap;
pub use sparse::SparseVector;

/// Errors produced by any part of the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: expected `<label>\\t<text>`")]
    MissingTab { line: usize },
    #[error("vocabulary is empty after applying min_count={min_count}")]
    EmptyVocabulary { min_count: u64 },
    #[error("relative frequency must be in (0, 1]")]
    ZeroFrequency,
    #[error("invalid training configuration: {0}")]
    BadConfig(String),
    #[error("need at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("corpus class `{0}` is not present in the model")]
    UnknownClass(String),
    #[error("row {0} has zero norm")]
    ZeroNorm(usize),
    #[error("positive and negative class must differ")]
    SameClass,
    #[error("expected exactly two classes, got {0}")]
    NotBinary(usize),
    #[error("training labels contain a single class")]
    SingleClassLabels,
    #[error("feature dimension mismatch: model has {model}, input has {input}")]
    DimensionMismatch { model: usize, input: usize },
    #[error("prediction and gold label sequences differ in length")]
    LengthMismatch,
    #[error("posterior entries must be non-negative")]
    NegativePosterior,
    #[error("bad magic in model file (expected CLASSVEC1)")]
    BadMagic,
    #[error("model file is truncated")]
    Truncated,
    #[error("model header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
