//! Embedding-based hashtag recommendation for microblog posts.
//!
//! The crate is `no_std` (it needs `alloc`). Enabling the `std` feature adds
//! a multi-threaded, nondeterministic skip-gram trainer.
//!
//! Pipeline overview:
//!
//! 1. [`corpus`] cleans raw posts into [`CleanTweet`]s, filters them by
//!    hashtag frequency and splits them into train/validation/test sets.
//! 2. [`skipgram`] trains word vectors with skip-gram and negative sampling.
//! 3. [`models`] builds the two hashtag models: [`Model1`] trains one
//!    embedding space per hashtag, [`Model2`] trains one global space.
//! 4. [`recommend`] scores hashtags for an unseen post and expands the best
//!    match through its co-occurring hashtags into a top-K list.
//! 5. [`eval`] measures hit-rates and computes lift against the [`lda`]
//!    topic-model baseline.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod corpus;
pub mod error;
pub mod eval;
pub mod lda;
pub mod models;
pub mod recommend;
pub mod skipgram;
pub mod synthetic;
pub mod vector;

pub use corpus::{CleanTweet, CorpusSplit, PipelineConfig, RawTweet, SplitRatios, Stemmer};
pub use error::{Error, Result};
pub use eval::{EvalReport, Metric, Prediction};
pub use lda::{LdaConfig, LdaModel};
pub use models::{HashtagGraph, Model1, Model2, ModelKind, TrainedModel};
pub use recommend::{RankScope, Recommendation};
pub use skipgram::{EmbeddingModel, TrainConfig, Vocabulary};
