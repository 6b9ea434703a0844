//! Hit-rate metrics over held-out tweets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::CleanTweet;
use crate::error::{Error, Result};
use crate::recommend::{recommend, HashtagScorer, RankScope, Recommendation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// One recommendation per tweet; a hit when it is among the true hashtags.
    #[serde(rename = "ALOC")]
    Aloc,
    /// As many recommendations as true hashtags; hits pooled over tweets.
    #[serde(rename = "MuC")]
    Muc,
}

impl Metric {
    /// Recommendation budget for a tweet with `truth_size` hashtags.
    pub fn k_for(self, truth_size: usize) -> usize {
        match self {
            Self::Aloc => 1,
            Self::Muc => truth_size,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Aloc => "ALOC",
            Self::Muc => "MuC",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Ranked(Recommendation),
    Unscorable { id: String },
}

impl Prediction {
    pub fn id(&self) -> &str {
        match self {
            Self::Ranked(r) => &r.tweet_id,
            Self::Unscorable { id } => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub hits: usize,
    /// Recommendation slots charged to this tweet.
    pub k: usize,
    pub truth_size: usize,
}

impl TweetRecord {
    pub fn precision(&self) -> f64 {
        ratio(self.hits, self.k)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.hits, self.truth_size)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metric: Metric,
    pub score: f64,
    pub n_tweets: usize,
    pub n_unscorable: usize,
    pub per_tweet: Vec<TweetRecord>,
}

/// Ground-truth hashtags keyed by tweet id.
pub fn truth_of(tweets: &[CleanTweet]) -> BTreeMap<String, BTreeSet<String>> {
    tweets.iter().map(|t| (t.id.clone(), t.hashtags.clone())).collect()
}

fn evaluate(
    metric: Metric,
    predictions: &[Prediction],
    truth: &BTreeMap<String, BTreeSet<String>>,
) -> Result<EvalReport> {
    let mut per_tweet = Vec::with_capacity(predictions.len());
    let mut n_unscorable = 0;
    for p in predictions {
        let id = p.id();
        let tags = truth.get(id).ok_or_else(|| Error::MissingTruth(id.into()))?;
        let k = metric.k_for(tags.len());
        let hits = match p {
            Prediction::Unscorable { .. } => {
                n_unscorable += 1;
                0
            }
            Prediction::Ranked(r) => match metric {
                Metric::Aloc => usize::from(tags.contains(&r.best)),
                Metric::Muc => {
                    if r.ranked.len() > k {
                        return Err(Error::TooManyRecommendations { id: id.into(), len: r.ranked.len(), k });
                    }
                    let distinct: BTreeSet<&String> = r.ranked.iter().map(|(t, _)| t).collect();
                    distinct.into_iter().filter(|t| tags.contains(*t)).count()
                }
            },
        };
        per_tweet.push(TweetRecord { id: id.into(), hits, k, truth_size: tags.len() });
    }
    let hits: usize = per_tweet.iter().map(|r| r.hits).sum();
    let slots: usize = per_tweet.iter().map(|r| r.k).sum();
    Ok(EvalReport { metric, score: ratio(hits, slots), n_tweets: per_tweet.len(), n_unscorable, per_tweet })
}

/// Fraction of tweets whose top recommendation is a true hashtag.
/// Unscorable tweets count as misses.
pub fn eval_aloc(predictions: &[Prediction], truth: &BTreeMap<String, BTreeSet<String>>) -> Result<EvalReport> {
    evaluate(Metric::Aloc, predictions, truth)
}

/// Hits over all tweets divided by the total number of true hashtags.
pub fn eval_muc(predictions: &[Prediction], truth: &BTreeMap<String, BTreeSet<String>>) -> Result<EvalReport> {
    evaluate(Metric::Muc, predictions, truth)
}

pub fn eval_metric(
    metric: Metric,
    predictions: &[Prediction],
    truth: &BTreeMap<String, BTreeSet<String>>,
) -> Result<EvalReport> {
    evaluate(metric, predictions, truth)
}

/// How many times better `score` is than `baseline`.
pub fn lift(score: f64, baseline: f64) -> Result<f64> {
    if !(baseline > 0.0) {
        return Err(Error::NonPositiveBaseline(baseline));
    }
    Ok(score / baseline)
}

/// Recommendations for each tweet with the budget `metric` prescribes.
pub fn predict_all<M: HashtagScorer + ?Sized>(
    model: &M,
    tweets: &[CleanTweet],
    metric: Metric,
    scope: RankScope,
) -> Vec<Prediction> {
    predict_with(tweets, metric, |t, k| recommend(model, t, k, scope))
}

/// [`predict_all`] for any recommender; errors become unscorable tweets.
pub fn predict_with<F>(tweets: &[CleanTweet], metric: Metric, mut recommender: F) -> Vec<Prediction>
where
    F: FnMut(&CleanTweet, usize) -> Result<Recommendation>,
{
    tweets
        .iter()
        .map(|t| {
            let k = metric.k_for(t.hashtags.len()).max(1);
            match recommender(t, k) {
                Ok(r) => Prediction::Ranked(r),
                Err(_) => Prediction::Unscorable { id: t.id.clone() },
            }
        })
        .collect()
}

/// One `id,hit,k` CSV row per tweet.
pub fn per_tweet_csv(report: &EvalReport) -> String {
    let mut out = String::from("id,hit,k\n");
    for r in &report.per_tweet {
        out.push_str(&format!("{},{},{}\n", csv_field(&r.id), r.hits, r.k));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.into()
    }
}
