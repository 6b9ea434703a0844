use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};

use crate::error::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");
const DEFAULT_SLANG: &str = include_str!("../../data/slang.tsv");

/// Reduces a lowercase word to its stem.
///
/// The crate ships no stemmer of its own; the command-line crate plugs in
/// the English Snowball (Porter2) algorithm.
pub trait Stemmer {
    fn stem(&self, word: &str) -> String;
}

impl<F> Stemmer for F
where
    F: Fn(&str) -> String,
{
    fn stem(&self, word: &str) -> String {
        self(word)
    }
}

/// Leaves words untouched.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoStemming;

impl Stemmer for NoStemming {
    fn stem(&self, word: &str) -> String {
        word.to_string()
    }
}

/// One token per line. Blank lines are skipped, entries are lowercased.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_ascii_lowercase)
        .collect()
}

/// `slang<TAB>expansion`, one entry per line. Blank lines are skipped.
pub fn parse_slang(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (slang, expansion) = line.split_once('\t').ok_or_else(|| Error::Dictionary {
            line: n + 1,
            reason: "expected slang<TAB>expansion".to_string(),
        })?;
        let slang = slang.trim();
        if slang.is_empty() || slang.contains(char::is_whitespace) {
            return Err(Error::Dictionary {
                line: n + 1,
                reason: format!("slang entry {slang:?} must be a single token"),
            });
        }
        out.insert(slang.to_ascii_lowercase(), expansion.trim().to_string());
    }
    Ok(out)
}

/// The small, standard English stopword list shipped in `data/`.
pub fn default_stopwords() -> BTreeSet<String> {
    parse_stopwords(DEFAULT_STOPWORDS)
}

/// A sample slang dictionary shipped in `data/`.
pub fn default_slang() -> BTreeMap<String, String> {
    parse_slang(DEFAULT_SLANG).expect("bundled slang dictionary is well formed")
}
