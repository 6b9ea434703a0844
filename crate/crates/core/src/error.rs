use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("untrainable document: no word occurs at least {min_count} times")]
    UntrainableDocument { min_count: u32 },

    #[error("no hashtag in the training corpus has a trainable document")]
    NoTrainableHashtag,

    #[error("cannot average an empty list of vectors")]
    EmptyAverage,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("tweet {0} shares no vocabulary with the model")]
    Unscorable(String),

    #[error("no ground truth for tweet {0}")]
    MissingTruth(String),

    #[error("tweet {id}: {len} hashtags recommended but k is {k}")]
    TooManyRecommendations { id: String, len: usize, k: usize },

    #[error("baseline score must be positive, got {0}")]
    NonPositiveBaseline(f64),

    #[error("topic model vocabulary is empty")]
    EmptyVocabulary,

    #[error("malformed data: {0}")]
    Decode(String),

    #[error("malformed dictionary line {line}: {reason}")]
    Dictionary { line: usize, reason: String },
}
