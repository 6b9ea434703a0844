use super::*;
use crate::synthetic::{generate, SyntheticSpec};
use alloc::vec;

pub(crate) fn tw(id: &str, tokens: &[&str], tags: &[&str]) -> CleanTweet {
    CleanTweet {
        id: id.into(),
        tokens: tokens.iter().map(|&t| t.into()).collect(),
        hashtags: tags.iter().map(|&t| t.into()).collect(),
    }
}

fn small_config() -> TrainConfig {
    TrainConfig { dim: 8, min_count: 1, epochs: 3, window: 2, seed: 11, ..TrainConfig::default() }
}

fn corpus(n: usize, seed: u64) -> Vec<CleanTweet> {
    let spec = SyntheticSpec { n_tweets: n, n_hashtags: 4, words_per_hashtag: 6, noise_words: 3, ..Default::default() };
    generate(&spec, seed).tweets
}

#[test]
fn documents_match_inverted_index() {
    let train = corpus(20, 5);
    let docs = build_hashtag_documents(&train);
    let all_tags: BTreeSet<&String> = train.iter().flat_map(|t| &t.hashtags).collect();
    assert_eq!(docs.keys().collect::<BTreeSet<_>>(), all_tags);
    for (tag, doc) in &docs {
        let mut ids = Vec::new();
        let mut lists = Vec::new();
        for t in &train {
            if t.hashtags.iter().any(|h| h == tag) {
                ids.push(t.id.clone());
                lists.push(t.tokens.clone());
            }
        }
        assert_eq!(doc.tweet_ids, ids);
        assert_eq!(doc.token_lists, lists);
    }
}

#[test]
fn graph_is_symmetric_and_expansion_matches_scan() {
    let train = corpus(40, 2);
    let graph = HashtagGraph::from_tweets(&train);
    for (tag, peers) in graph.cooccurrence() {
        assert!(!peers.contains(tag));
        for p in peers {
            assert!(graph.cooccurring(p).unwrap().contains(tag));
        }
        let mut expected = BTreeSet::new();
        for t in &train {
            if t.hashtags.contains(tag) {
                expected.extend(t.hashtags.iter().cloned());
            }
        }
        assert_eq!(&graph.expansion(tag), &expected);
    }
    assert_eq!(graph.expansion("unseen"), BTreeSet::from([String::from("unseen")]));
}

#[test]
fn hashtag_vector_is_occurrence_weighted() {
    let train = vec![tw("1", &["x", "x", "y", "q"], &["t"]), tw("2", &["x", "y", "y"], &["t"])];
    let model = skipgram::train(&[["x", "y"]; 20], &small_config()).unwrap();
    let docs = build_hashtag_documents(&train);
    let got = hashtag_vector(&model, &docs["t"].token_lists).unwrap();
    let (x, y) = (model.lookup("x").unwrap(), model.lookup("y").unwrap());
    for d in 0..model.dim() {
        let expected = (3.0 * f64::from(x[d]) + 3.0 * f64::from(y[d])) / 6.0;
        assert!((got[d] - expected).abs() < 1e-12);
    }
    assert_eq!(hashtag_vector::<&str>(&model, &[vec!["q"]]), None);
}

#[test]
fn model1_marks_untrainable_hashtags_absent() {
    let mut train = corpus(60, 1);
    train.push(tw("rare", &["zzz"], &["lonely"]));
    let cfg = TrainConfig { min_count: 2, ..small_config() };
    let m1 = train_model1(&train, &cfg).unwrap();
    assert!(m1.spaces["lonely"].is_none());
    for (tag, doc) in build_hashtag_documents(&train) {
        if let Some(space) = &m1.spaces[&tag] {
            assert_eq!(space.model, skipgram::train(&doc.token_lists, &cfg).unwrap());
            assert_eq!(Some(space.vector.clone()), hashtag_vector(&space.model, &doc.token_lists));
        }
    }
}

#[test]
fn model1_fails_when_nothing_trains() {
    let train = vec![tw("1", &["a"], &["x"]), tw("2", &["b"], &["y"])];
    assert_eq!(train_model1(&train, &TrainConfig::default()), Err(Error::NoTrainableHashtag));
    assert_eq!(train_model1(&[], &TrainConfig::default()), Err(Error::EmptyCorpus));
}

#[test]
fn model2_vectors_come_from_global_space() {
    let train = corpus(80, 3);
    let cfg = small_config();
    let m2 = train_model2(&train, &cfg).unwrap();
    let docs: Vec<Vec<String>> = train.iter().map(|t| t.tokens.clone()).collect();
    assert_eq!(m2.global, skipgram::train(&docs, &cfg).unwrap());
    for (tag, doc) in build_hashtag_documents(&train) {
        assert_eq!(m2.hashtag_vectors[&tag], hashtag_vector(&m2.global, &doc.token_lists));
    }
    assert_eq!(train_model2(&[], &cfg), Err(Error::EmptyCorpus));
    let untrainable = vec![tw("1", &["a"], &["x"])];
    assert!(matches!(train_model2(&untrainable, &TrainConfig::default()), Err(Error::UntrainableDocument { .. })));
}

#[test]
fn both_models_cover_the_same_hashtags() {
    let train = corpus(80, 4);
    let m1 = TrainedModel::train(ModelKind::Model1, &train, &small_config()).unwrap();
    let m2 = TrainedModel::train(ModelKind::Model2, &train, &small_config()).unwrap();
    let k1: Vec<&str> = m1.hashtag_vectors().into_keys().collect();
    let k2: Vec<&str> = m2.hashtag_vectors().into_keys().collect();
    assert_eq!(k1, k2);
    assert_eq!(m1.graph(), m2.graph());
    assert_eq!((m1.kind(), m2.kind()), (ModelKind::Model1, ModelKind::Model2));
}

#[cfg(feature = "std")]
#[test]
fn threaded_model1_matches_sequential() {
    let train = corpus(120, 6);
    let cfg = small_config();
    assert_eq!(train_model1_with_workers(&train, &cfg, 3).unwrap(), train_model1(&train, &cfg).unwrap());
}

#[cfg(feature = "std")]
#[test]
fn threaded_model2_is_usable() {
    let train = corpus(120, 6);
    let m = train_model2_with_workers(&train, &small_config(), 2).unwrap();
    assert!(m.global.vectors().iter().all(|v| v.is_finite()));
    assert_eq!(m.hashtag_vectors.len(), build_hashtag_documents(&train).len());
}
