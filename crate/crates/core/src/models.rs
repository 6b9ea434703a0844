//! The two trained artifacts.
//!
//! [`Model1`] trains a private embedding space per hashtag from that
//! hashtag's document. [`Model2`] trains one global space over every
//! training tweet. Both represent a hashtag by the occurrence-weighted mean
//! of its document's word vectors.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::CleanTweet;
use crate::error::{Error, Result};
use crate::skipgram::{self, EmbeddingModel, TrainConfig};
use crate::vector::MeanAccumulator;

/// Every training tweet carrying one hashtag, hashtags and mentions already
/// removed from the tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashtagDocument {
    pub hashtag: String,
    pub token_lists: Vec<Vec<String>>,
    pub tweet_ids: Vec<String>,
}

/// One document per hashtag, tweets in input order. A tweet with `k`
/// hashtags lands in `k` documents.
pub fn build_hashtag_documents(train: &[CleanTweet]) -> BTreeMap<String, HashtagDocument> {
    let mut docs: BTreeMap<String, HashtagDocument> = BTreeMap::new();
    for tweet in train {
        for tag in &tweet.hashtags {
            let doc = docs.entry(tag.clone()).or_insert_with(|| HashtagDocument {
                hashtag: tag.clone(),
                token_lists: Vec::new(),
                tweet_ids: Vec::new(),
            });
            doc.token_lists.push(tweet.tokens.clone());
            doc.tweet_ids.push(tweet.id.clone());
        }
    }
    docs
}

/// Which hashtags appeared together in training tweets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashtagGraph {
    cooccurrence: BTreeMap<String, BTreeSet<String>>,
    tweet_hashtags: BTreeMap<String, BTreeSet<String>>,
}

impl HashtagGraph {
    pub fn from_tweets(train: &[CleanTweet]) -> Self {
        let mut cooccurrence: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut tweet_hashtags = BTreeMap::new();
        for tweet in train {
            for tag in &tweet.hashtags {
                let peers = cooccurrence.entry(tag.clone()).or_default();
                peers.extend(tweet.hashtags.iter().filter(|&o| o != tag).cloned());
            }
            tweet_hashtags.insert(tweet.id.clone(), tweet.hashtags.clone());
        }
        Self { cooccurrence, tweet_hashtags }
    }

    pub fn from_parts(
        cooccurrence: BTreeMap<String, BTreeSet<String>>,
        tweet_hashtags: BTreeMap<String, BTreeSet<String>>,
    ) -> Self {
        Self { cooccurrence, tweet_hashtags }
    }

    pub fn cooccurrence(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.cooccurrence
    }

    pub fn tweet_hashtags(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.tweet_hashtags
    }

    /// Hashtags co-occurring with `tag`, not including `tag` itself.
    pub fn cooccurring(&self, tag: &str) -> Option<&BTreeSet<String>> {
        self.cooccurrence.get(tag)
    }

    /// The union of hashtag sets over all training tweets containing `tag`.
    pub fn expansion(&self, tag: &str) -> BTreeSet<String> {
        let mut out = self.cooccurring(tag).cloned().unwrap_or_default();
        out.insert(String::from(tag));
        out
    }

    pub fn hashtags(&self) -> impl Iterator<Item = &str> {
        self.cooccurrence.keys().map(String::as_str)
    }
}

/// Mean of the model's rows over every token occurrence it knows, in
/// document order. `None` when no occurrence survives.
pub fn hashtag_vector<S: AsRef<str>>(model: &EmbeddingModel, token_lists: &[Vec<S>]) -> Option<Vec<f64>> {
    let mut acc = MeanAccumulator::new(model.dim());
    for token in token_lists.iter().flatten() {
        if let Some(row) = model.lookup(token.as_ref()) {
            acc.push(row);
        }
    }
    acc.finish()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HashtagSpace {
    pub model: EmbeddingModel,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model1 {
    /// `None` for hashtags whose document had an empty vocabulary.
    pub spaces: BTreeMap<String, Option<HashtagSpace>>,
    pub graph: HashtagGraph,
    pub config: TrainConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model2 {
    pub global: EmbeddingModel,
    /// `None` for hashtags with no occurrence in the global vocabulary.
    pub hashtag_vectors: BTreeMap<String, Option<Vec<f64>>>,
    pub graph: HashtagGraph,
}

fn train_space(doc: &HashtagDocument, config: &TrainConfig) -> Result<Option<HashtagSpace>> {
    match skipgram::train(&doc.token_lists, config) {
        Ok(model) => {
            let vector = hashtag_vector(&model, &doc.token_lists)
                .expect("a non-empty vocabulary comes from at least one occurrence");
            Ok(Some(HashtagSpace { model, vector }))
        }
        Err(Error::UntrainableDocument { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn assemble_model1(
    train: &[CleanTweet],
    config: &TrainConfig,
    spaces: BTreeMap<String, Option<HashtagSpace>>,
) -> Result<Model1> {
    if spaces.values().all(Option::is_none) {
        return Err(Error::NoTrainableHashtag);
    }
    Ok(Model1 { spaces, graph: HashtagGraph::from_tweets(train), config: *config })
}

/// Trains one embedding space per hashtag.
pub fn train_model1(train: &[CleanTweet], config: &TrainConfig) -> Result<Model1> {
    if train.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    config.validate()?;
    let spaces = build_hashtag_documents(train)
        .into_iter()
        .map(|(tag, doc)| Ok((tag, train_space(&doc, config)?)))
        .collect::<Result<_>>()?;
    assemble_model1(train, config, spaces)
}

/// [`train_model1`] with hashtags spread over `workers` threads. Each
/// hashtag still trains single-threaded, so the result is identical.
#[cfg(feature = "std")]
pub fn train_model1_with_workers(train: &[CleanTweet], config: &TrainConfig, workers: usize) -> Result<Model1> {
    if workers <= 1 {
        return train_model1(train, config);
    }
    if train.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    config.validate()?;
    let docs: Vec<HashtagDocument> = build_hashtag_documents(train).into_values().collect();
    let results: Vec<Result<(String, Option<HashtagSpace>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let docs = &docs;
                scope.spawn(move || {
                    docs.iter()
                        .skip(w)
                        .step_by(workers)
                        .map(|d| Ok((d.hashtag.clone(), train_space(d, config)?)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("hashtag trainer panicked"))
            .collect()
    });
    let spaces = results.into_iter().collect::<Result<_>>()?;
    assemble_model1(train, config, spaces)
}

fn assemble_model2(train: &[CleanTweet], global: EmbeddingModel) -> Model2 {
    let hashtag_vectors = build_hashtag_documents(train)
        .into_iter()
        .map(|(tag, doc)| {
            let v = hashtag_vector(&global, &doc.token_lists);
            (tag, v)
        })
        .collect();
    Model2 { global, hashtag_vectors, graph: HashtagGraph::from_tweets(train) }
}

fn global_document(train: &[CleanTweet]) -> Vec<&[String]> {
    train.iter().map(|t| t.tokens.as_slice()).collect()
}

/// Trains one global space over all training tweets.
pub fn train_model2(train: &[CleanTweet], config: &TrainConfig) -> Result<Model2> {
    if train.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let global = skipgram::train(&global_document(train), config)?;
    Ok(assemble_model2(train, global))
}

/// [`train_model2`] using the lock-free multi-worker trainer.
/// Nondeterministic when `workers > 1`.
#[cfg(feature = "std")]
pub fn train_model2_with_workers(train: &[CleanTweet], config: &TrainConfig, workers: usize) -> Result<Model2> {
    if train.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let global = skipgram::train_parallel(&global_document(train), config, workers)?;
    Ok(assemble_model2(train, global))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Model1,
    Model2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    One(Model1),
    Two(Model2),
}

impl TrainedModel {
    pub fn train(kind: ModelKind, train: &[CleanTweet], config: &TrainConfig) -> Result<Self> {
        Ok(match kind {
            ModelKind::Model1 => Self::One(train_model1(train, config)?),
            ModelKind::Model2 => Self::Two(train_model2(train, config)?),
        })
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Self::One(_) => ModelKind::Model1,
            Self::Two(_) => ModelKind::Model2,
        }
    }

    pub fn graph(&self) -> &HashtagGraph {
        match self {
            Self::One(m) => &m.graph,
            Self::Two(m) => &m.graph,
        }
    }

    pub fn config(&self) -> &TrainConfig {
        match self {
            Self::One(m) => &m.config,
            Self::Two(m) => m.global.config(),
        }
    }

    /// Hashtag to its vector, absent vectors included as `None`.
    pub fn hashtag_vectors(&self) -> BTreeMap<&str, Option<&[f64]>> {
        match self {
            Self::One(m) => m
                .spaces
                .iter()
                .map(|(t, s)| (t.as_str(), s.as_ref().map(|s| s.vector.as_slice())))
                .collect(),
            Self::Two(m) => m
                .hashtag_vectors
                .iter()
                .map(|(t, v)| (t.as_str(), v.as_deref()))
                .collect(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests;
