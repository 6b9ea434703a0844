//! Topic-model baseline: collapsed Gibbs LDA and representative-tweet
//! hashtag assignment.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{hashtag_counts, CleanTweet};
use crate::error::{Error, Result};
use crate::recommend::Recommendation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaConfig {
    pub n_topics: u32,
    /// Document-topic prior; `None` means `50 / n_topics`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: u32,
    pub fold_in_iterations: u32,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self { n_topics: 100, alpha: None, beta: 0.01, iterations: 500, fold_in_iterations: 50, seed: 0 }
    }
}

impl LdaConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / f64::from(self.n_topics.max(1)))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.n_topics == 0 {
            return fail("n_topics must be positive");
        }
        if !(self.alpha() > 0.0 && self.alpha().is_finite()) {
            return fail("alpha must be positive");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return fail("beta must be positive");
        }
        if self.iterations == 0 || self.fold_in_iterations == 0 {
            return fail("iteration counts must be positive");
        }
        Ok(())
    }
}

/// Draws an index with probability proportional to `weights`.
fn draw(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

/// Collapsed Gibbs state over a fixed set of documents.
#[derive(Debug, Clone)]
pub struct GibbsSampler {
    docs: Vec<Vec<u32>>,
    z: Vec<Vec<u32>>,
    n_dk: Vec<u32>,
    /// Word-major, `n_words × n_topics`.
    n_wk: Vec<u32>,
    n_k: Vec<u32>,
    n_topics: usize,
    n_words: usize,
    alpha: f64,
    beta: f64,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl GibbsSampler {
    /// `docs` hold word indices below `n_words`. Assignments start uniform.
    pub fn new(docs: Vec<Vec<u32>>, n_words: usize, config: &LdaConfig) -> Result<Self> {
        config.validate()?;
        let k = config.n_topics as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut s = Self {
            n_dk: vec![0; docs.len() * k],
            n_wk: vec![0; n_words * k],
            n_k: vec![0; k],
            z: Vec::with_capacity(docs.len()),
            docs: Vec::new(),
            n_topics: k,
            n_words,
            alpha: config.alpha(),
            beta: config.beta,
            rng: ChaCha8Rng::seed_from_u64(0),
            weights: vec![0.0; k],
        };
        for (d, doc) in docs.iter().enumerate() {
            let zd: Vec<u32> = doc
                .iter()
                .map(|&w| {
                    let t = rng.random_range(0..k);
                    s.n_dk[d * k + t] += 1;
                    s.n_wk[w as usize * k + t] += 1;
                    s.n_k[t] += 1;
                    t as u32
                })
                .collect();
            s.z.push(zd);
        }
        s.docs = docs;
        s.rng = rng;
        Ok(s)
    }

    /// One pass resampling every token's topic.
    pub fn sweep(&mut self) {
        let (k, v) = (self.n_topics, self.n_words);
        let vbeta = v as f64 * self.beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i] as usize;
                let old = self.z[d][i] as usize;
                self.n_dk[d * k + old] -= 1;
                self.n_wk[w * k + old] -= 1;
                self.n_k[old] -= 1;
                let (n_d, n_w) = (&self.n_dk[d * k..(d + 1) * k], &self.n_wk[w * k..(w + 1) * k]);
                for t in 0..k {
                    self.weights[t] = (f64::from(n_d[t]) + self.alpha) * (f64::from(n_w[t]) + self.beta)
                        / (f64::from(self.n_k[t]) + vbeta);
                }
                let new = draw(&self.weights, &mut self.rng);
                self.z[d][i] = new as u32;
                self.n_dk[d * k + new] += 1;
                self.n_wk[w * k + new] += 1;
                self.n_k[new] += 1;
            }
        }
    }

    /// Tokens currently assigned to each topic.
    pub fn topic_totals(&self) -> &[u32] {
        &self.n_k
    }

    pub fn token_count(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }

    /// Smoothed `(topic_word, doc_topic)` estimates, row-major.
    pub fn estimates(&self) -> (Vec<f64>, Vec<f64>) {
        let (k, v) = (self.n_topics, self.n_words);
        let mut topic_word = vec![0.0; k * v];
        for t in 0..k {
            let denom = f64::from(self.n_k[t]) + v as f64 * self.beta;
            for w in 0..v {
                topic_word[t * v + w] = (f64::from(self.n_wk[w * k + t]) + self.beta) / denom;
            }
        }
        let mut doc_topic = vec![0.0; self.docs.len() * k];
        for (d, doc) in self.docs.iter().enumerate() {
            let denom = doc.len() as f64 + k as f64 * self.alpha;
            for t in 0..k {
                doc_topic[d * k + t] = (f64::from(self.n_dk[d * k + t]) + self.alpha) / denom;
            }
        }
        (topic_word, doc_topic)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub n_topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub vocabulary: Vec<String>,
    /// `n_topics × vocabulary.len()`, row-major.
    pub topic_word: Vec<f64>,
    /// `doc_ids.len() × n_topics`, row-major.
    pub doc_topic: Vec<f64>,
    pub doc_ids: Vec<String>,
    pub seed: u64,
    pub gibbs_iters: u32,
    pub fold_in_iters: u32,
}

/// FNV-1a, used to derive a per-tweet seed independent of evaluation order.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

impl LdaModel {
    pub fn topic_word_row(&self, topic: usize) -> &[f64] {
        let v = self.vocabulary.len();
        &self.topic_word[topic * v..(topic + 1) * v]
    }

    pub fn doc_topic_row(&self, doc: usize) -> &[f64] {
        &self.doc_topic[doc * self.n_topics..(doc + 1) * self.n_topics]
    }

    fn word_index(&self) -> BTreeMap<&str, usize> {
        self.vocabulary.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect()
    }

    /// Topic distribution of an unseen token list under the fixed model.
    /// `None` when no token is in the vocabulary.
    pub fn infer(&self, id: &str, tokens: &[String]) -> Option<Vec<f64>> {
        let index = self.word_index();
        self.infer_indexed(&index, id, tokens)
    }

    fn infer_indexed(&self, index: &BTreeMap<&str, usize>, id: &str, tokens: &[String]) -> Option<Vec<f64>> {
        let words: Vec<usize> = tokens.iter().filter_map(|t| index.get(t.as_str()).copied()).collect();
        if words.is_empty() {
            return None;
        }
        let k = self.n_topics;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(id));
        let mut n_k = vec![0u32; k];
        let mut z: Vec<usize> = words
            .iter()
            .map(|_| {
                let t = rng.random_range(0..k);
                n_k[t] += 1;
                t
            })
            .collect();
        let mut weights = vec![0.0; k];
        for _ in 0..self.fold_in_iters {
            for (i, &w) in words.iter().enumerate() {
                n_k[z[i]] -= 1;
                for t in 0..k {
                    weights[t] = (f64::from(n_k[t]) + self.alpha) * self.topic_word_row(t)[w];
                }
                z[i] = draw(&weights, &mut rng);
                n_k[z[i]] += 1;
            }
        }
        let denom = words.len() as f64 + k as f64 * self.alpha;
        Some(n_k.iter().map(|&n| (f64::from(n) + self.alpha) / denom).collect())
    }
}

/// Trains on the training tweets' content tokens.
pub fn lda_train(train: &[CleanTweet], config: &LdaConfig) -> Result<LdaModel> {
    if train.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    config.validate()?;
    let vocabulary: Vec<String> =
        train.iter().flat_map(|t| t.tokens.iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    if vocabulary.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let index: BTreeMap<&str, u32> = vocabulary.iter().enumerate().map(|(i, w)| (w.as_str(), i as u32)).collect();
    let docs = train.iter().map(|t| t.tokens.iter().map(|w| index[w.as_str()]).collect()).collect();
    let mut sampler = GibbsSampler::new(docs, vocabulary.len(), config)?;
    for _ in 0..config.iterations {
        sampler.sweep();
    }
    let (topic_word, doc_topic) = sampler.estimates();
    Ok(LdaModel {
        n_topics: config.n_topics as usize,
        alpha: config.alpha(),
        beta: config.beta,
        vocabulary,
        topic_word,
        doc_topic,
        doc_ids: train.iter().map(|t| t.id.clone()).collect(),
        seed: config.seed,
        gibbs_iters: config.iterations,
        fold_in_iters: config.fold_in_iterations,
    })
}

/// Number of topics a test tweet is matched against.
pub const TOP_TOPICS: usize = 3;

/// Precomputed per-topic representatives for repeated recommendation.
#[derive(Debug, Clone)]
pub struct LdaRecommender<'a> {
    model: &'a LdaModel,
    index: BTreeMap<&'a str, usize>,
    /// Training-tweet index of each topic's representative.
    representatives: Vec<usize>,
    hashtags: Vec<&'a BTreeSet<String>>,
    frequency: BTreeMap<String, u32>,
}

impl<'a> LdaRecommender<'a> {
    /// `train` must be the tweets the model was trained on, in order.
    pub fn new(model: &'a LdaModel, train: &'a [CleanTweet]) -> Result<Self> {
        let ids_match =
            train.len() == model.doc_ids.len() && train.iter().zip(&model.doc_ids).all(|(t, id)| &t.id == id);
        if !ids_match {
            return Err(Error::InvalidConfig("training tweets do not match the LDA model".into()));
        }
        let representatives = (0..model.n_topics)
            .map(|t| {
                (0..train.len())
                    .max_by(|&a, &b| {
                        let (pa, pb) = (model.doc_topic_row(a)[t], model.doc_topic_row(b)[t]);
                        pa.total_cmp(&pb).then_with(|| train[b].id.cmp(&train[a].id))
                    })
                    .expect("training set is non-empty")
            })
            .collect();
        Ok(Self {
            model,
            index: model.vocabulary.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect(),
            representatives,
            hashtags: train.iter().map(|t| &t.hashtags).collect(),
            frequency: hashtag_counts(train),
        })
    }

    pub fn representative(&self, topic: usize) -> usize {
        self.representatives[topic]
    }

    pub fn recommend(&self, tweet: &CleanTweet, k: usize) -> Result<Recommendation> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be positive".into()));
        }
        let theta = self
            .model
            .infer_indexed(&self.index, &tweet.id, &tweet.tokens)
            .ok_or_else(|| Error::Unscorable(tweet.id.clone()))?;
        let mut topics: Vec<usize> = (0..theta.len()).collect();
        topics.sort_by(|&a, &b| theta[b].total_cmp(&theta[a]).then(a.cmp(&b)));
        topics.truncate(TOP_TOPICS);

        // Topics arrive strongest first, so the first weight seen is the largest.
        let mut pooled: BTreeMap<&str, f64> = BTreeMap::new();
        for &t in &topics {
            for tag in self.hashtags[self.representatives[t]] {
                pooled.entry(tag.as_str()).or_insert(theta[t]);
            }
        }
        let freq = |t: &str| self.frequency.get(t).copied().unwrap_or(0);
        let mut ranked: Vec<(String, f64)> = pooled.into_iter().map(|(t, w)| (String::from(t), w)).collect();
        ranked.sort_by(|a, b| {
            b.1.total_cmp(&a.1).then_with(|| freq(&b.0).cmp(&freq(&a.0))).then_with(|| a.0.cmp(&b.0))
        });
        ranked.truncate(k);
        if ranked.is_empty() {
            return Err(Error::Unscorable(tweet.id.clone()));
        }
        let known = tweet.tokens.iter().filter(|t| self.index.contains_key(t.as_str())).count();
        Ok(Recommendation {
            tweet_id: tweet.id.clone(),
            best: ranked[0].0.clone(),
            ranked,
            coverage: known as f64 / tweet.tokens.len() as f64,
        })
    }
}

/// One-off form of [`LdaRecommender::recommend`].
pub fn lda_recommend(model: &LdaModel, train: &[CleanTweet], tweet: &CleanTweet, k: usize) -> Result<Recommendation> {
    LdaRecommender::new(model, train)?.recommend(tweet, k)
}

#[cfg(test)]
mod tests;
