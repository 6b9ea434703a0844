use super::*;
use crate::models::tests::tw;
use alloc::format;
use alloc::vec;

/// Documents alternate between vocabulary block A and block B.
fn two_blocks(n: usize, seed: u64) -> Vec<CleanTweet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let block = if i % 2 == 0 { "a" } else { "b" };
            let tokens: Vec<String> = (0..10).map(|_| format!("{block}{}", rng.random_range(0..10))).collect();
            let tag = format!("{block}tag{}", i % 3);
            CleanTweet { id: format!("d{i:03}"), tokens, hashtags: BTreeSet::from([tag]) }
        })
        .collect()
}

fn small(seed: u64) -> LdaConfig {
    LdaConfig { n_topics: 2, alpha: Some(0.5), iterations: 60, fold_in_iterations: 20, seed, ..LdaConfig::default() }
}

fn dominant(row: &[f64]) -> usize {
    (0..row.len()).max_by(|&a, &b| row[a].total_cmp(&row[b]).then(b.cmp(&a))).unwrap()
}

#[test]
fn defaults() {
    let c = LdaConfig::default();
    assert_eq!((c.n_topics, c.alpha(), c.beta, c.iterations, c.fold_in_iterations), (100, 0.5, 0.01, 500, 50));
    assert!(LdaConfig { n_topics: 0, ..c }.validate().is_err());
    assert!(LdaConfig { beta: 0.0, ..c }.validate().is_err());
    assert!(LdaConfig { alpha: Some(-1.0), ..c }.validate().is_err());
}

#[test]
fn matrices_are_row_stochastic() {
    let m = lda_train(&two_blocks(40, 1), &LdaConfig { n_topics: 5, iterations: 20, ..LdaConfig::default() }).unwrap();
    for t in 0..m.n_topics {
        assert!((m.topic_word_row(t).iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    for d in 0..m.doc_ids.len() {
        assert!((m.doc_topic_row(d).iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    let theta = m.infer("x", &["a1".into(), "b2".into()]).unwrap();
    assert!((theta.iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn counts_are_conserved_every_sweep() {
    let docs: Vec<Vec<u32>> = (0..30).map(|d| (0..7).map(|i| ((d * 7 + i) % 13) as u32).collect()).collect();
    let mut s = GibbsSampler::new(docs, 13, &LdaConfig { n_topics: 4, ..LdaConfig::default() }).unwrap();
    assert_eq!(s.token_count(), 210);
    for _ in 0..25 {
        s.sweep();
        assert_eq!(s.topic_totals().iter().map(|&n| n as usize).sum::<usize>(), s.token_count());
    }
}

#[test]
fn separable_blocks_get_distinct_topics() {
    for seed in 0..5 {
        let train = two_blocks(100, seed + 10);
        let m = lda_train(&train, &small(seed)).unwrap();
        let agree = (0..train.len())
            .filter(|&d| dominant(m.doc_topic_row(d)) == dominant(m.doc_topic_row(0)) ^ (d % 2 == 1) as usize)
            .count();
        let agreement = agree.max(train.len() - agree) as f64 / train.len() as f64;
        assert!(agreement >= 0.9, "seed {seed}: {agreement}");
    }
}

#[test]
fn single_word_single_topic() {
    let train = vec![tw("only", &["w"], &["t"])];
    let m = lda_train(&train, &LdaConfig { n_topics: 1, iterations: 5, ..LdaConfig::default() }).unwrap();
    assert_eq!(m.doc_topic, vec![1.0]);
    assert_eq!(m.topic_word, vec![1.0]);
}

#[test]
fn training_is_seeded() {
    let train = two_blocks(30, 2);
    assert_eq!(lda_train(&train, &small(4)).unwrap(), lda_train(&train, &small(4)).unwrap());
    assert_eq!(lda_train(&[], &small(4)), Err(Error::EmptyCorpus));
    assert_eq!(lda_train(&[tw("1", &[], &["x"])], &small(4)), Err(Error::EmptyVocabulary));
}

#[test]
fn one_topic_collapses_to_one_representative() {
    let train = two_blocks(20, 3);
    let m = lda_train(&train, &LdaConfig { n_topics: 1, iterations: 10, ..LdaConfig::default() }).unwrap();
    let r = LdaRecommender::new(&m, &train).unwrap();
    let rep = &train[r.representative(0)];
    // All rows are equal under one topic, so the smallest id wins.
    assert_eq!(rep.id, "d000");
    let got = r.recommend(&tw("q", &["a1", "b1"], &[]), 5).unwrap();
    let tags: BTreeSet<String> = got.ranked.iter().map(|(t, _)| t.clone()).collect();
    assert_eq!(&tags, &rep.hashtags);
}

#[test]
fn block_a_tweet_gets_block_a_hashtags() {
    for seed in 0..5 {
        let train = two_blocks(100, seed + 20);
        let m = lda_train(&train, &small(seed)).unwrap();
        let r = LdaRecommender::new(&m, &train).unwrap();
        let tweet = tw("probe", &["a1", "a2", "a3", "a7", "a9"], &[]);
        let theta = m.infer("probe", &tweet.tokens).unwrap();
        let allowed = &train[r.representative(dominant(&theta))].hashtags;
        assert!(allowed.iter().all(|t| t.starts_with('a')), "seed {seed}");
        // With two topics the pool also holds the B representative, ranked after.
        let got = r.recommend(&tweet, allowed.len()).unwrap();
        assert!(got.ranked.iter().all(|(t, _)| allowed.contains(t)), "seed {seed}: {:?}", got.ranked);
        let full = r.recommend(&tweet, 10).unwrap();
        let first_b = full.ranked.iter().position(|(t, _)| t.starts_with('b')).unwrap_or(full.ranked.len());
        assert!(full.ranked[first_b..].iter().all(|(t, _)| t.starts_with('b')));
    }
}

#[test]
fn pooled_hashtags_rank_by_weight_frequency_name() {
    // Three topics over two words; representatives are documents 0, 1 and 2.
    let train = vec![
        tw("0", &["u"], &["zeta", "beta"]),
        tw("1", &["v"], &["alpha", "beta", "gamma"]),
        tw("2", &["u"], &["delta"]),
        tw("3", &["v"], &["gamma"]),
    ];
    let m = LdaModel {
        n_topics: 3,
        alpha: 0.1,
        beta: 0.01,
        vocabulary: vec!["u".into(), "v".into()],
        topic_word: vec![0.9, 0.1, 0.1, 0.9, 0.5, 0.5],
        doc_topic: vec![0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8, 0.2, 0.6, 0.2],
        doc_ids: train.iter().map(|t| t.id.clone()).collect(),
        seed: 0,
        gibbs_iters: 1,
        fold_in_iters: 30,
    };
    let r = LdaRecommender::new(&m, &train).unwrap();
    assert_eq!((0..3).map(|t| r.representative(t)).collect::<Vec<_>>(), vec![0, 1, 2]);
    let tweet = tw("q", &["u", "u", "u", "u", "u", "u"], &[]);
    let theta = m.infer("q", &tweet.tokens).unwrap();
    let got = r.recommend(&tweet, 10).unwrap();

    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| theta[b].total_cmp(&theta[a]).then(a.cmp(&b)));
    let freq = |t: &str| train.iter().filter(|d| d.hashtags.contains(t)).count();
    let mut expected: Vec<(String, f64)> = Vec::new();
    for &t in &order {
        for h in &train[t].hashtags {
            if !expected.iter().any(|(e, _)| e == h) {
                expected.push((h.clone(), theta[t]));
            }
        }
    }
    expected.sort_by(|a, b| b.1.total_cmp(&a.1).then(freq(&b.0).cmp(&freq(&a.0))).then(a.0.cmp(&b.0)));
    assert_eq!(got.ranked, expected);
    assert_eq!(got.best, expected[0].0);
    assert_eq!(r.recommend(&tweet, 2).unwrap().ranked, expected[..2].to_vec());
}

#[test]
fn inference_is_order_independent_and_unscorable_without_overlap() {
    let train = two_blocks(30, 5);
    let m = lda_train(&train, &small(1)).unwrap();
    let a = m.infer("x", &["a1".into(), "a2".into()]);
    let _ = m.infer("y", &["b1".into()]);
    assert_eq!(a, m.infer("x", &["a1".into(), "a2".into()]));
    let r = LdaRecommender::new(&m, &train).unwrap();
    assert_eq!(r.recommend(&tw("n", &["zzz"], &[]), 1), Err(Error::Unscorable("n".into())));
    assert!(LdaRecommender::new(&m, &train[1..]).is_err());
}
