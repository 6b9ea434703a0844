//! Scoring hashtags against a tweet and expanding the winner through the
//! co-occurrence graph.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::CleanTweet;
use crate::error::{Error, Result};
use crate::models::{HashtagGraph, Model1, Model2, TrainedModel};
use crate::skipgram::EmbeddingModel;
use crate::vector::{cosine, MeanAccumulator};

/// Cosine scores for every hashtag that could be scored against a tweet.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scores {
    pub by_hashtag: BTreeMap<String, f64>,
    /// Fraction of the tweet's tokens found in at least one scoring space.
    pub coverage: f64,
    /// How many tweet averages were computed.
    pub tweet_averagings: usize,
}

pub trait HashtagScorer {
    fn scores(&self, tokens: &[String]) -> Scores;
    fn graph(&self) -> &HashtagGraph;
}

fn tweet_mean(model: &EmbeddingModel, tokens: &[String]) -> Option<Vec<f64>> {
    let mut acc = MeanAccumulator::new(model.dim());
    for t in tokens {
        if let Some(row) = model.lookup(t) {
            acc.push(row);
        }
    }
    acc.finish()
}

fn coverage(tokens: &[String], known: impl Fn(&str) -> bool) -> f64 {
    if tokens.is_empty() {
        return 0.0;
    }
    tokens.iter().filter(|t| known(t)).count() as f64 / tokens.len() as f64
}

impl HashtagScorer for Model1 {
    fn scores(&self, tokens: &[String]) -> Scores {
        let mut out = Scores::default();
        for (tag, space) in &self.spaces {
            let Some(space) = space else { continue };
            let Some(mean) = tweet_mean(&space.model, tokens) else { continue };
            out.tweet_averagings += 1;
            let score = cosine(&space.vector, &mean).expect("same space, same dimension");
            out.by_hashtag.insert(tag.clone(), score);
        }
        out.coverage = coverage(tokens, |t| {
            self.spaces.values().flatten().any(|s| s.model.vocabulary().contains(t))
        });
        out
    }

    fn graph(&self) -> &HashtagGraph {
        &self.graph
    }
}

impl HashtagScorer for Model2 {
    fn scores(&self, tokens: &[String]) -> Scores {
        let mut out = Scores {
            coverage: coverage(tokens, |t| self.global.vocabulary().contains(t)),
            ..Scores::default()
        };
        let Some(mean) = tweet_mean(&self.global, tokens) else { return out };
        out.tweet_averagings = 1;
        for (tag, v) in &self.hashtag_vectors {
            if let Some(v) = v {
                let score = cosine(v, &mean).expect("same space, same dimension");
                out.by_hashtag.insert(tag.clone(), score);
            }
        }
        out
    }

    fn graph(&self) -> &HashtagGraph {
        &self.graph
    }
}

impl HashtagScorer for TrainedModel {
    fn scores(&self, tokens: &[String]) -> Scores {
        match self {
            Self::One(m) => m.scores(tokens),
            Self::Two(m) => m.scores(tokens),
        }
    }

    fn graph(&self) -> &HashtagGraph {
        match self {
            Self::One(m) => m.graph(),
            Self::Two(m) => m.graph(),
        }
    }
}

/// Which hashtags compete for the ranked list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankScope {
    /// Only the best hashtag's co-occurrence expansion.
    #[default]
    Expansion,
    /// Every scored hashtag.
    Global,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub tweet_id: String,
    /// The single highest-scoring hashtag.
    pub best: String,
    /// At most `k` hashtags with scores, best first.
    pub ranked: Vec<(String, f64)>,
    pub coverage: f64,
}

fn by_score_then_tag(a: &(String, f64), b: &(String, f64)) -> core::cmp::Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

/// Highest score; ties go to the lexicographically smallest hashtag.
pub fn best_hashtag(scores: &BTreeMap<String, f64>) -> Option<(&str, f64)> {
    let mut best: Option<(&str, f64)> = None;
    for (tag, &s) in scores {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((tag, s));
        }
    }
    best
}

/// Builds the ranked list from precomputed scores.
pub fn rank(
    tweet_id: &str,
    scores: &Scores,
    graph: &HashtagGraph,
    k: usize,
    scope: RankScope,
) -> Result<Recommendation> {
    if k == 0 {
        return Err(Error::InvalidConfig(String::from("k must be positive")));
    }
    let (best, _) = best_hashtag(&scores.by_hashtag).ok_or_else(|| Error::Unscorable(tweet_id.into()))?;
    let ranked = match scope {
        RankScope::Global => {
            let mut all: Vec<(String, f64)> =
                scores.by_hashtag.iter().map(|(t, &s)| (t.clone(), s)).collect();
            all.sort_by(by_score_then_tag);
            all.truncate(k);
            all
        }
        RankScope::Expansion => {
            let candidates = graph.expansion(best);
            let mut scored: Vec<(String, f64)> = candidates
                .iter()
                .filter_map(|t| scores.by_hashtag.get(t).map(|&s| (t.clone(), s)))
                .collect();
            scored.sort_by(by_score_then_tag);
            scored.truncate(k);
            let pad: Vec<(String, f64)> = candidates
                .iter()
                .filter(|t| !scores.by_hashtag.contains_key(*t))
                .take(k - scored.len())
                .map(|t| (t.clone(), 0.0))
                .collect();
            scored.extend(pad);
            scored
        }
    };
    Ok(Recommendation { tweet_id: tweet_id.into(), best: best.into(), ranked, coverage: scores.coverage })
}

/// Scores `tweet` and returns up to `k` hashtags.
pub fn recommend<M: HashtagScorer + ?Sized>(
    model: &M,
    tweet: &CleanTweet,
    k: usize,
    scope: RankScope,
) -> Result<Recommendation> {
    let scores = model.scores(&tweet.tokens);
    rank(&tweet.id, &scores, model.graph(), k, scope)
}
