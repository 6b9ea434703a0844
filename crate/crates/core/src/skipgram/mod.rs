//! Skip-gram word vectors trained with negative sampling.

pub mod codec;
pub mod loss;
#[cfg(feature = "std")]
mod parallel;
mod train;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use train::{NegativeSampler, Schedule, Trainer};

#[cfg(feature = "std")]
pub use parallel::train_parallel;

/// Exponent applied to unigram counts for negative sampling.
pub const NEGATIVE_POWER: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    /// Maximum context distance.
    pub window: u32,
    /// Words seen fewer times than this are left out of the vocabulary.
    pub min_count: u32,
    /// Vector dimensionality.
    pub dim: u32,
    pub epochs: u32,
    pub negatives: u32,
    pub lr_initial: f64,
    pub lr_floor: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            window: 4,
            min_count: 3,
            dim: 50,
            epochs: 5,
            negatives: 5,
            lr_initial: 0.025,
            lr_floor: 1e-4,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.window == 0 || self.min_count == 0 || self.dim == 0 || self.epochs == 0 {
            return fail("window, min_count, dim and epochs must be positive".into());
        }
        if !(self.lr_floor > 0.0 && self.lr_floor < self.lr_initial && self.lr_initial.is_finite()) {
            return fail(format!(
                "learning rates must satisfy 0 < lr_floor < lr_initial, got {} and {}",
                self.lr_floor, self.lr_initial
            ));
        }
        Ok(())
    }
}

/// Words in descending frequency, ties in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    index: BTreeMap<String, u32>,
}

impl Vocabulary {
    pub fn build<D, S>(document: &[D], min_count: u32) -> Self
    where
        D: AsRef<[S]>,
        S: AsRef<str>,
    {
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for sentence in document {
            for token in sentence.as_ref() {
                *counts.entry(token.as_ref()).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<(&str, u64)> =
            counts.into_iter().filter(|&(_, c)| c >= u64::from(min_count)).collect();
        // BTreeMap order is lexicographic, and the sort is stable.
        entries.sort_by(|a, b| b.1.cmp(&a.1));
        Self::from_sorted(entries.into_iter().map(|(w, c)| (String::from(w), c)).collect())
    }

    fn from_sorted(entries: Vec<(String, u64)>) -> Self {
        let index = entries.iter().enumerate().map(|(i, (w, _))| (w.clone(), i as u32)).collect();
        let (words, counts) = entries.into_iter().unzip();
        Self { words, counts, index }
    }

    /// Rebuilds a vocabulary from stored `(word, count)` rows, keeping their
    /// order. Duplicate words are rejected.
    pub fn from_entries(entries: Vec<(String, u64)>) -> Result<Self> {
        let vocab = Self::from_sorted(entries);
        if vocab.index.len() != vocab.words.len() {
            return Err(Error::Decode("duplicate word in vocabulary".into()));
        }
        Ok(vocab)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).map(|&i| i as usize)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.words.iter().map(String::as_str).zip(self.counts.iter().copied())
    }
}

pub fn build_vocabulary<D, S>(document: &[D], min_count: u32) -> Vocabulary
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    Vocabulary::build(document, min_count)
}

/// One `dim`-sized `f32` row per vocabulary word.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    vocabulary: Vocabulary,
    dim: usize,
    vectors: Vec<f32>,
    config: TrainConfig,
}

impl EmbeddingModel {
    pub fn from_parts(vocabulary: Vocabulary, vectors: Vec<f32>, config: TrainConfig) -> Result<Self> {
        let dim = config.dim as usize;
        if vectors.len() != vocabulary.len() * dim {
            return Err(Error::Decode(format!(
                "{} components for {} words of dimension {dim}",
                vectors.len(),
                vocabulary.len()
            )));
        }
        if vectors.iter().any(|x| !x.is_finite()) {
            return Err(Error::Decode("non-finite vector component".into()));
        }
        Ok(Self { vocabulary, dim, vectors, config })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn vectors(&self) -> &[f32] {
        &self.vectors
    }

    pub fn row(&self, index: usize) -> &[f32] {
        &self.vectors[index * self.dim..(index + 1) * self.dim]
    }

    pub fn lookup(&self, word: &str) -> Option<&[f32]> {
        self.vocabulary.index_of(word).map(|i| self.row(i))
    }

    /// Copy with every component multiplied by `factor`.
    pub fn scaled(&self, factor: f32) -> Self {
        let mut out = self.clone();
        out.vectors.iter_mut().for_each(|x| *x *= factor);
        out
    }
}

/// Vocabulary-indexed sentences, out-of-vocabulary tokens removed.
fn index_document<D, S>(document: &[D], vocabulary: &Vocabulary) -> Vec<Vec<u32>>
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    document
        .iter()
        .map(|s| {
            s.as_ref()
                .iter()
                .filter_map(|t| vocabulary.index_of(t.as_ref()).map(|i| i as u32))
                .collect::<Vec<u32>>()
        })
        .filter(|s| !s.is_empty())
        .collect()
}

struct Prepared {
    vocabulary: Vocabulary,
    sentences: Vec<Vec<u32>>,
    input: Vec<f32>,
    rng: ChaCha8Rng,
}

fn prepare<D, S>(document: &[D], config: &TrainConfig) -> Result<Prepared>
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    config.validate()?;
    let vocabulary = Vocabulary::build(document, config.min_count);
    if vocabulary.is_empty() {
        return Err(Error::UntrainableDocument { min_count: config.min_count });
    }
    let sentences = index_document(document, &vocabulary);
    let dim = config.dim as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let input = (0..vocabulary.len() * dim)
        .map(|_| (rng.random::<f32>() - 0.5) / dim as f32)
        .collect();
    Ok(Prepared { vocabulary, sentences, input, rng })
}

/// Trains skip-gram vectors over `document`, one token list per tweet.
///
/// Single-threaded and deterministic for a fixed seed. The returned rows
/// are the input (center-word) vectors.
pub fn train<D, S>(document: &[D], config: &TrainConfig) -> Result<EmbeddingModel>
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    let Prepared { vocabulary, sentences, input, mut rng } = prepare(document, config)?;
    let dim = config.dim as usize;
    let sampler = NegativeSampler::new(vocabulary.counts(), NEGATIVE_POWER);
    let output = alloc::vec![0.0f32; input.len()];
    let mut trainer = Trainer::new(input, output, dim, config.negatives, &sampler);
    let words: u64 = sentences.iter().map(|s| s.len() as u64).sum();
    let schedule = Schedule {
        lr_initial: config.lr_initial,
        lr_floor: config.lr_floor,
        total_steps: words * u64::from(config.epochs),
    };
    let views: Vec<&[u32]> = sentences.iter().map(Vec::as_slice).collect();
    trainer.run(&views, config.epochs, config.window, schedule, &mut rng);
    EmbeddingModel::from_parts(vocabulary, trainer.input, *config)
}
