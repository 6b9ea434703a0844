use rust_stemmers::{Algorithm, Stemmer as Snowball};

/// The English Snowball stemmer, as the corpus pipeline expects it.
pub struct Porter2(Snowball);

impl Porter2 {
    pub fn new() -> Self {
        Self(Snowball::create(Algorithm::English))
    }
}

impl Default for Porter2 {
    fn default() -> Self {
        Self::new()
    }
}

impl emtagger_core::Stemmer for Porter2 {
    fn stem(&self, word: &str) -> String {
        self.0.stem(word).into_owned()
    }
}

impl emtagger_core::Stemmer for &Porter2 {
    fn stem(&self, word: &str) -> String {
        self.0.stem(word).into_owned()
    }
}
