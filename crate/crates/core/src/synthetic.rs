//! Separable synthetic corpora with known hashtag-topic structure.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{CleanTweet, RawTweet};

const CONSONANTS: &[u8] = b"bdgkmptz";
const VOWELS: &[u8] = b"aou";

/// Number of distinct words [`word`] can produce.
pub const WORD_SPACE: usize = 8 * 3 * 8 * 3 * 8;

/// The `index`-th five-letter consonant-vowel word. These are left
/// unchanged by English suffix stripping and collide with no stopword.
pub fn word(index: usize) -> String {
    assert!(index < WORD_SPACE, "word index out of range");
    let mut i = index;
    let mut out = String::with_capacity(5);
    for pos in 0..5 {
        let alphabet = if pos % 2 == 0 { CONSONANTS } else { VOWELS };
        out.push(char::from(alphabet[i % alphabet.len()]));
        i /= alphabet.len();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub n_tweets: usize,
    pub n_hashtags: usize,
    pub words_per_hashtag: usize,
    pub noise_words: usize,
    /// Probability that a token is drawn from the shared noise pool.
    pub noise_rate: f64,
    pub min_len: usize,
    pub max_len: usize,
    /// Probability that a tweet carries a second, different hashtag.
    pub second_hashtag_rate: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_tweets: 5000,
            n_hashtags: 20,
            words_per_hashtag: 50,
            noise_words: 50,
            noise_rate: 0.1,
            min_len: 8,
            max_len: 14,
            second_hashtag_rate: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub hashtags: Vec<String>,
    /// Private vocabulary of each hashtag, aligned with `hashtags`.
    pub vocabularies: Vec<Vec<String>>,
    pub noise: Vec<String>,
    pub tweets: Vec<CleanTweet>,
}

pub fn hashtag_name(i: usize) -> String {
    format!("tag{i:02}")
}

/// Each tweet picks one hashtag (sometimes two) and draws every token from
/// one of its hashtags' vocabularies, or from the noise pool.
pub fn generate(spec: &SyntheticSpec, seed: u64) -> SyntheticCorpus {
    assert!(spec.n_hashtags > 0 && spec.words_per_hashtag > 0 && spec.min_len <= spec.max_len);
    assert!(spec.n_hashtags * spec.words_per_hashtag + spec.noise_words <= WORD_SPACE);
    let hashtags: Vec<String> = (0..spec.n_hashtags).map(hashtag_name).collect();
    let vocabularies: Vec<Vec<String>> = (0..spec.n_hashtags)
        .map(|h| (0..spec.words_per_hashtag).map(|j| word(h * spec.words_per_hashtag + j)).collect())
        .collect();
    let base = spec.n_hashtags * spec.words_per_hashtag;
    let noise: Vec<String> = (0..spec.noise_words).map(|j| word(base + j)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tweets = (0..spec.n_tweets)
        .map(|i| {
            let primary = rng.random_range(0..spec.n_hashtags);
            let mut own = alloc::vec![primary];
            if spec.n_hashtags > 1 && rng.random_bool(spec.second_hashtag_rate) {
                let other = (primary + rng.random_range(1..spec.n_hashtags)) % spec.n_hashtags;
                own.push(other);
            }
            let len = rng.random_range(spec.min_len..=spec.max_len);
            let tokens = (0..len)
                .map(|_| {
                    if !noise.is_empty() && rng.random_bool(spec.noise_rate) {
                        noise[rng.random_range(0..noise.len())].clone()
                    } else {
                        let h = own[rng.random_range(0..own.len())];
                        let v = &vocabularies[h];
                        v[rng.random_range(0..v.len())].clone()
                    }
                })
                .collect();
            CleanTweet {
                id: format!("syn{seed}-{i:05}"),
                tokens,
                hashtags: own.iter().map(|&h| hashtags[h].clone()).collect::<BTreeSet<_>>(),
            }
        })
        .collect();
    SyntheticCorpus { hashtags, vocabularies, noise, tweets }
}

impl SyntheticCorpus {
    /// The same tweets as raw English posts with hashtags appended.
    pub fn raw_tweets(&self) -> Vec<RawTweet> {
        self.tweets
            .iter()
            .map(|t| {
                let mut text = t.tokens.join(" ");
                for tag in &t.hashtags {
                    text.push_str(" #");
                    text.push_str(tag);
                }
                RawTweet { id: t.id.clone(), text, lang: "en".into(), is_retweet: false, is_quote: false }
            })
            .collect()
    }
}
