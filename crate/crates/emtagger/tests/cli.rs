mod common;

use std::path::Path;

use common::{fixture, run, run_capture, small_spec, synthetic_workspace};
use emtagger::commands::FunnelReport;

fn read_funnel(work: &Path) -> FunnelReport {
    serde_json::from_slice(&std::fs::read(work.join("corpus/funnel.json")).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn funnel_matches_hand_trace() {
    let dir = tempfile::tempdir().unwrap();
    let work = dir.path().join("work");
    let (input, cfg) = (fixture("funnel.jsonl"), fixture("funnel.toml"));
    assert_eq!(run(&["--config", s(&cfg), "--workdir", s(&work), "preprocess", "--input", s(&input)]), 0);
    let report = read_funnel(&work);
    let counts: Vec<u64> = report.rows.iter().map(|r| r.count).collect();
    assert_eq!(counts, [12, 11, 9, 8, 7, 6, 4, 0, 2]);
    assert_eq!(report.rows[5].criterion, "Hashtag filtering (retain if 2-4 occurrences)");
    assert_eq!(report.skipped_records.malformed, 1);

    let kept: Vec<emtagger_core::CleanTweet> = ["train", "validation", "test"]
        .iter()
        .flat_map(|p| emtagger::jsonl::read_jsonl(&work.join(format!("corpus/{p}.jsonl"))).unwrap())
        .collect();
    let mut ids: Vec<&str> = kept.iter().map(|t| t.id.as_str()).collect();
    ids.sort();
    assert_eq!(ids, ["t01", "t02", "t08", "t09", "t10", "t12"]);
    let t09 = kept.iter().find(|t| t.id == "t09").unwrap();
    assert_eq!(t09.tokens, ["big", "wave", "caf"]);
    let t12 = kept.iter().find(|t| t.id == "t12").unwrap();
    assert_eq!(t12.hashtags.iter().collect::<Vec<_>>(), ["summer"]);
}

#[test]
fn preprocess_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (input, cfg) = (fixture("funnel.jsonl"), fixture("funnel.toml"));
    for w in [&a, &b] {
        assert_eq!(run(&["--config", s(&cfg), "--workdir", s(w), "preprocess", "--input", s(&input)]), 0);
    }
    for f in ["train.jsonl", "validation.jsonl", "test.jsonl", "split.json", "funnel.json"] {
        assert_eq!(std::fs::read(a.join("corpus").join(f)).unwrap(), std::fs::read(b.join("corpus").join(f)).unwrap());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("empty.jsonl"), "").unwrap();
    assert_eq!(run_capture(d, &["--help"]).0, 0);
    assert_eq!(run_capture(d, &["--version"]).0, 0);
    assert_eq!(run_capture(d, &["frobnicate"]).0, 1);
    assert_eq!(run_capture(d, &["preprocess"]).0, 1);
    assert_eq!(run_capture(d, &["train", "--workers", "0"]).0, 1);
    let (code, _, err) = run_capture(d, &["preprocess", "--input", "empty.jsonl"]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(run_capture(d, &["preprocess", "--input", "missing.jsonl"]).0, 2);
    assert_eq!(run_capture(d, &["train"]).0, 2);
    let (code, _, err) = run_capture(d, &["evaluate", "--metric", "muc", "--k-policy", "aloc"]);
    assert_eq!(code, 1);
    assert!(err.contains("does not match"), "{err}");
    assert_eq!(run_capture(d, &["sweep", "--l", ""]).0, 1);
    std::fs::write(d.join("bad.toml"), "[train]\ndim = 0\n").unwrap();
    std::fs::write(d.join("raw.jsonl"), r##"{"id":"1","text":"x #y","lang":"en"}"##).unwrap();
    assert_eq!(run_capture(d, &["--config", "bad.toml", "train"]).0, 1);
}

#[test]
fn lift_override_reproduces_published_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run_capture(dir.path(), &["evaluate", "--score", "0.5829", "--baseline-score", "0.0779"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lift_rounded"], "7.48");
    let (_, out, _) =
        run_capture(dir.path(), &["evaluate", "--metric", "muc", "--score", "0.5083", "--baseline-score", "0.0779"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["lift_rounded"].as_str(), v["metric"].as_str()), (Some("6.53"), Some("MuC")));
    assert_eq!(run_capture(dir.path(), &["evaluate", "--score", "0.5"]).0, 1);
    assert_eq!(run_capture(dir.path(), &["evaluate", "--score", "0.5", "--baseline-score", "0"]).0, 2);
}

#[test]
fn seed_change_is_a_config_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synthetic_workspace(dir.path(), &small_spec(200), 1, "");
    let c = s(&cfg);
    assert_eq!(run(&["--config", c, "preprocess"]), 0);
    assert_eq!(run(&["--config", c, "train"]), 0);
    assert_eq!(run(&["--config", c, "--seed", "2", "evaluate"]), 2);
    assert_eq!(run(&["--config", c, "--seed", "2", "train"]), 2);
    assert_eq!(run(&["--config", c, "evaluate"]), 0);
}

#[test]
fn bundle_from_other_preprocessing_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synthetic_workspace(dir.path(), &small_spec(200), 1, "");
    let c = s(&cfg);
    let other_bundle = dir.path().join("other");
    assert_eq!(run(&["--config", c, "--seed", "5", "preprocess"]), 0);
    assert_eq!(run(&["--config", c, "--seed", "5", "train", "--bundle", s(&other_bundle)]), 0);
    assert_eq!(run(&["--config", c, "preprocess"]), 0);
    assert_eq!(run(&["--config", c, "evaluate", "--bundle", s(&other_bundle)]), 2);
}

#[test]
fn untrainable_corpus_names_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synthetic_workspace(dir.path(), &small_spec(60), 1, "");
    let c = s(&cfg);
    assert_eq!(run(&["--config", c, "preprocess"]), 0);
    std::fs::write(
        dir.path().join("strict.toml"),
        std::fs::read_to_string(&cfg).unwrap().replace("[train]\n", "[train]\nmin_count = 100000\n"),
    )
    .unwrap();
    let (code, _, err) = run_capture(dir.path(), &["--config", "strict.toml", "train", "--model", "model2"]);
    assert_eq!(code, 2);
    assert!(err.contains("global document"), "{err}");
    let (code, _, err) = run_capture(dir.path(), &["--config", "strict.toml", "train", "--model", "model1"]);
    assert_eq!(code, 2);
    assert!(err.contains("hashtag"), "{err}");
}

#[test]
fn recommend_writes_one_line_per_tweet() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synthetic_workspace(dir.path(), &small_spec(200), 3, "k = 2");
    let c = s(&cfg);
    let out = dir.path().join("recs.jsonl");
    assert_eq!(run(&["--config", c, "preprocess"]), 0);
    assert_eq!(run(&["--config", c, "train"]), 0);
    assert_eq!(run(&["--config", c, "recommend", "--output", s(&out)]), 0);
    let test: Vec<emtagger_core::CleanTweet> =
        emtagger::jsonl::read_jsonl(&dir.path().join("work/corpus/test.jsonl")).unwrap();
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), test.len());
    for (line, tweet) in lines.iter().zip(&test) {
        assert_eq!(line["id"], tweet.id.as_str());
        let ranked = line["ranked"].as_array().unwrap();
        assert!(ranked.len() <= 2 && !ranked.is_empty());
        assert_eq!(ranked[0][0], line["best"]);
    }
}
