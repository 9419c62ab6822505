#![allow(dead_code)]

use std::path::PathBuf;

use poxverifi_core::checkworthiness::{HeuristicScorer, CORPUS_THRESHOLD};
use poxverifi_core::corpus::{
    ingest_articles, ingest_factcheck_feed, parse_articles, ClaimSource, Corpus, LabelAliases,
    RatingLabel, VettedClaim,
};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

/// Feed claims followed by article claims, as the ingestion pipeline builds them.
pub fn fixture_corpus() -> Corpus {
    let feed = ingest_factcheck_feed(&read_fixture("feed/monkeypox_feed.jsonl"), &LabelAliases::default()).unwrap();
    let (articles, rejected) = parse_articles(&read_fixture("articles/who_articles.jsonl"));
    assert!(rejected.is_empty());
    let who = ingest_articles(&articles, &HeuristicScorer, CORPUS_THRESHOLD).unwrap();
    let mut corpus = Corpus::from_claims(feed.claims).unwrap();
    corpus.extend(who.claims).unwrap();
    corpus
}

/// 40 + 40 claims over disjoint vocabularies.
pub fn separable_corpus() -> Vec<VettedClaim> {
    let true_words = ["vaccine", "approved", "doctors", "clinic", "study", "trial", "evidence", "data"];
    let false_words = ["hoax", "plot", "secret", "microchip", "scam", "staged", "lies", "cover"];
    let mut claims = Vec::new();
    for i in 0..40 {
        let t = format!(
            "{} {} {} t{}",
            true_words[i % 8],
            true_words[(i / 8 + 3) % 8],
            true_words[(i * 3 + 1) % 8],
            i
        );
        claims.push(VettedClaim::new(&t, ClaimSource::FactCheckFeed, "", RatingLabel::True, None, "en").unwrap());
        let f = format!(
            "{} {} {} f{}",
            false_words[i % 8],
            false_words[(i / 8 + 3) % 8],
            false_words[(i * 3 + 1) % 8],
            i
        );
        claims.push(VettedClaim::new(&f, ClaimSource::FactCheckFeed, "", RatingLabel::False, None, "en").unwrap());
    }
    claims
}
