//! Raw post ingestion: cleaning, normalization, frequency filtering and
//! the train/validation/test split.

mod lexicon;
mod tokenize;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lexicon::{
    default_slang, default_stopwords, parse_slang, parse_stopwords, NoStemming, Stemmer,
};
pub use tokenize::{extract_hashtags, strip_non_ascii, tokenize};

/// Normalization repeats until the token stream stops changing. Two passes
/// settle almost everything; the bound only guards against slang cycles.
const MAX_NORMALIZE_PASSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTweet {
    pub id: String,
    pub text: String,
    pub lang: String,
    #[serde(default)]
    pub is_retweet: bool,
    #[serde(default)]
    pub is_quote: bool,
}

/// A preprocessed post: content tokens plus the hashtags it carried.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanTweet {
    pub id: String,
    pub tokens: Vec<String>,
    pub hashtags: BTreeSet<String>,
}

/// Split proportions as integer parts; `70:10:20` means 70%, 10% and 20%.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: u32,
    pub validation: u32,
    pub test: u32,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self { train: 70, validation: 10, test: 20 }
    }
}

impl SplitRatios {
    fn total(&self) -> u64 {
        u64::from(self.train) + u64::from(self.validation) + u64::from(self.test)
    }

    /// `(train, validation, test)` sizes for `n` items: floor for the first
    /// two, remainder to test.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let total = self.total();
        let n64 = n as u64;
        let train = (n64 * u64::from(self.train) / total) as usize;
        let validation = (n64 * u64::from(self.validation) / total) as usize;
        (train, validation, n - train - validation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub min_hashtag_freq: u32,
    pub max_hashtag_freq: u32,
    pub stopwords: BTreeSet<String>,
    pub slang: BTreeMap<String, String>,
    pub split_ratios: SplitRatios,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            min_hashtag_freq: 200,
            max_hashtag_freq: 500,
            stopwords: default_stopwords(),
            slang: default_slang(),
            split_ratios: SplitRatios::default(),
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_hashtag_freq == 0 {
            return Err(Error::InvalidConfig("min_hashtag_freq must be positive".into()));
        }
        if self.min_hashtag_freq > self.max_hashtag_freq {
            return Err(Error::InvalidConfig(format!(
                "min_hashtag_freq {} exceeds max_hashtag_freq {}",
                self.min_hashtag_freq, self.max_hashtag_freq
            )));
        }
        if self.split_ratios.total() == 0 {
            return Err(Error::InvalidConfig("split ratios must not all be zero".into()));
        }
        Ok(())
    }
}

/// Why [`Cleaner::clean`] rejected a post.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    NotEnglish,
    RetweetOrQuote,
    NoHashtag,
    OnlyStopwordHashtags,
}

/// Applies the cleaning and normalization stages to raw posts.
pub struct Cleaner<'a, S> {
    config: &'a PipelineConfig,
    stemmer: S,
}

impl<'a, S: Stemmer> Cleaner<'a, S> {
    pub fn new(config: &'a PipelineConfig, stemmer: S) -> Self {
        Self { config, stemmer }
    }

    pub fn clean(&self, raw: &RawTweet) -> core::result::Result<CleanTweet, DropReason> {
        if !raw.lang.eq_ignore_ascii_case("en") {
            return Err(DropReason::NotEnglish);
        }
        if raw.is_retweet || raw.is_quote {
            return Err(DropReason::RetweetOrQuote);
        }
        let ascii = strip_non_ascii(&raw.text);
        let (content, mut hashtags) = extract_hashtags(&ascii);
        if hashtags.is_empty() {
            return Err(DropReason::NoHashtag);
        }
        hashtags.retain(|h| !self.config.stopwords.contains(h));
        if hashtags.is_empty() {
            return Err(DropReason::OnlyStopwordHashtags);
        }
        Ok(CleanTweet { id: raw.id.clone(), tokens: self.normalize(&content), hashtags })
    }

    /// Turns hashtag-free content text into the final token stream.
    ///
    /// Stages per pass: lowercasing, slang expansion, stopword removal,
    /// stemming. Passes repeat until the stream is stable, so the output is
    /// a fixed point: normalizing `tokens.join(" ")` gives `tokens` back.
    pub fn normalize(&self, content: &str) -> Vec<String> {
        let mut tokens = self.pass(tokenize(&strip_non_ascii(content)));
        for _ in 1..MAX_NORMALIZE_PASSES {
            let next = self.pass(tokens.clone());
            if next == tokens {
                break;
            }
            tokens = next;
        }
        tokens
    }

    fn pass(&self, tokens: Vec<String>) -> Vec<String> {
        let mut expanded = Vec::with_capacity(tokens.len());
        for token in tokens {
            let lower = token.to_ascii_lowercase();
            match self.config.slang.get(&lower) {
                Some(expansion) => expanded.extend(
                    tokenize(&strip_non_ascii(expansion))
                        .into_iter()
                        .map(|t| t.to_ascii_lowercase()),
                ),
                None => expanded.push(lower),
            }
        }
        expanded
            .into_iter()
            .filter(|t| !self.config.stopwords.contains(t))
            .map(|t| self.stemmer.stem(&t))
            .filter(|t| !t.is_empty())
            .collect()
    }
}

/// Convenience wrapper around [`Cleaner::clean`].
pub fn clean<S: Stemmer>(raw: &RawTweet, config: &PipelineConfig, stemmer: S) -> Option<CleanTweet> {
    Cleaner::new(config, stemmer).clean(raw).ok()
}

/// Number of tweets each hashtag appears in.
pub fn hashtag_counts(tweets: &[CleanTweet]) -> BTreeMap<String, u32> {
    let mut counts = BTreeMap::new();
    for tweet in tweets {
        for tag in &tweet.hashtags {
            *counts.entry(tag.clone()).or_insert(0) += 1;
        }
    }
    counts
}

/// Keeps tweets with at least one hashtag whose count lies in `[min, max]`.
/// Kept tweets retain all of their hashtags.
pub fn retain_by_counts(
    tweets: Vec<CleanTweet>,
    counts: &BTreeMap<String, u32>,
    min: u32,
    max: u32,
) -> Vec<CleanTweet> {
    tweets
        .into_iter()
        .filter(|t| {
            t.hashtags
                .iter()
                .any(|h| counts.get(h).is_some_and(|&c| (min..=max).contains(&c)))
        })
        .collect()
}

pub fn filter_by_hashtag_frequency(tweets: Vec<CleanTweet>, config: &PipelineConfig) -> Vec<CleanTweet> {
    let counts = hashtag_counts(&tweets);
    retain_by_counts(tweets, &counts, config.min_hashtag_freq, config.max_hashtag_freq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitPart {
    Train,
    Validation,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSplit {
    pub train: Vec<CleanTweet>,
    pub validation: Vec<CleanTweet>,
    pub test: Vec<CleanTweet>,
    pub seed: u64,
}

impl CorpusSplit {
    /// Tweet id to the part it landed in.
    pub fn assignments(&self) -> BTreeMap<String, SplitPart> {
        let parts = [
            (SplitPart::Train, &self.train),
            (SplitPart::Validation, &self.validation),
            (SplitPart::Test, &self.test),
        ];
        parts
            .into_iter()
            .flat_map(|(part, tweets)| tweets.iter().map(move |t| (t.id.clone(), part)))
            .collect()
    }

    pub fn part(&self, part: SplitPart) -> &[CleanTweet] {
        match part {
            SplitPart::Train => &self.train,
            SplitPart::Validation => &self.validation,
            SplitPart::Test => &self.test,
        }
    }
}

/// Seeded shuffle, then cut at the ratio boundaries.
pub fn split(tweets: Vec<CleanTweet>, config: &PipelineConfig) -> Result<CorpusSplit> {
    if tweets.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    config.validate()?;
    let mut tweets = tweets;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    tweets.shuffle(&mut rng);
    let (n_train, n_validation, _) = config.split_ratios.sizes(tweets.len());
    let test = tweets.split_off(n_train + n_validation);
    let validation = tweets.split_off(n_train);
    Ok(CorpusSplit { train: tweets, validation, test, seed: config.seed })
}

/// Stage-by-stage tweet counts through the pipeline.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Funnel {
    pub total: u64,
    pub english: u64,
    pub original: u64,
    pub with_hashtag: u64,
    pub with_content_hashtag: u64,
    pub frequency_filtered: u64,
    pub train: u64,
    pub validation: u64,
    pub test: u64,
}

impl Funnel {
    pub fn record(&mut self, outcome: &core::result::Result<CleanTweet, DropReason>) {
        let depth = match outcome {
            Err(DropReason::NotEnglish) => 0,
            Err(DropReason::RetweetOrQuote) => 1,
            Err(DropReason::NoHashtag) => 2,
            Err(DropReason::OnlyStopwordHashtags) => 3,
            Ok(_) => 4,
        };
        self.total += 1;
        let stages = [
            &mut self.english,
            &mut self.original,
            &mut self.with_hashtag,
            &mut self.with_content_hashtag,
        ];
        for stage in stages.into_iter().take(depth) {
            *stage += 1;
        }
    }

    pub fn record_split(&mut self, filtered: usize, split: &CorpusSplit) {
        self.frequency_filtered = filtered as u64;
        self.train = split.train.len() as u64;
        self.validation = split.validation.len() as u64;
        self.test = split.test.len() as u64;
    }

    /// Rows in the order of a tweet-selection table.
    pub fn rows(&self, config: &PipelineConfig) -> Vec<(String, u64)> {
        alloc::vec![
            ("Total number of tweets".into(), self.total),
            ("Tweets in English".into(), self.english),
            ("English tweets with original content (no retweets or quotes)".into(), self.original),
            ("English tweets containing at least one hashtag".into(), self.with_hashtag),
            ("Tweets with at least one non-stopword hashtag".into(), self.with_content_hashtag),
            (
                format!(
                    "Hashtag filtering (retain if {}-{} occurrences)",
                    config.min_hashtag_freq, config.max_hashtag_freq
                ),
                self.frequency_filtered,
            ),
            ("Training tweet dataset size".into(), self.train),
            ("Validation tweet dataset size".into(), self.validation),
            ("Testing tweet dataset size".into(), self.test),
        ]
    }
}
