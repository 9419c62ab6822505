//! Check-worthiness scoring: how likely a sentence is to carry a verifiable
//! factual claim.
//!
//! [`heuristic_score`] is a local, deterministic scorer built from surface
//! features. [`RemoteScorer`] talks to an external scoring endpoint that
//! answers with `{"score": <number>}`.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Verbs that usually introduce an assertion about the world.
pub const CLAIM_VERBS: &[&str] = &[
    "is",
    "are",
    "was",
    "were",
    "has",
    "have",
    "causes",
    "caused",
    "spreads",
    "spread",
    "infected",
    "confirmed",
    "reported",
    "declared",
    "found",
    "kills",
    "prevents",
    "transmits",
];

/// Threshold used when building the vetted corpus from article sentences.
pub const CORPUS_THRESHOLD: f64 = 0.8;

// Feature weights in hundredths, so boundary scores such as 0.80 are exact.
const BASE_POINTS: u32 = 30;
const DIGIT_POINTS: u32 = 25;
const VERB_POINTS: u32 = 20;
const LENGTH_POINTS: u32 = 15;
const CAPITAL_POINTS: u32 = 10;
const LENGTH_RANGE: std::ops::RangeInclusive<usize> = 8..=40;

#[derive(Debug, Error, PartialEq)]
pub enum ScorerError {
    #[error("scorer unavailable: {0}")]
    Unavailable(String),
    #[error("scorer returned a malformed response: {0}")]
    Malformed(String),
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
}

/// A score in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CheckworthinessScore(f64);

impl CheckworthinessScore {
    pub fn new(value: f64) -> Option<Self> {
        (value.is_finite() && (0.0..=1.0).contains(&value)).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for CheckworthinessScore {
    type Error = String;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value).ok_or_else(|| format!("score {value} outside [0, 1]"))
    }
}

impl From<CheckworthinessScore> for f64 {
    fn from(s: CheckworthinessScore) -> f64 {
        s.0
    }
}

impl fmt::Display for CheckworthinessScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.0)
    }
}

fn strip_token(token: &str) -> String {
    token
        .chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Scores a sentence from its surface features.
///
/// 0.30 base, +0.25 for any ASCII digit, +0.20 for a claim verb, +0.15 when
/// the whitespace token count is in 8..=40, +0.10 when a token after the first
/// starts with an uppercase letter; clamped to 1.
pub fn heuristic_score(sentence: &str) -> CheckworthinessScore {
    let tokens: Vec<&str> = sentence.split_whitespace().collect();
    let mut points = BASE_POINTS;
    if sentence.bytes().any(|b| b.is_ascii_digit()) {
        points += DIGIT_POINTS;
    }
    if tokens
        .iter()
        .any(|t| CLAIM_VERBS.contains(&strip_token(t).as_str()))
    {
        points += VERB_POINTS;
    }
    if LENGTH_RANGE.contains(&tokens.len()) {
        points += LENGTH_POINTS;
    }
    if tokens
        .iter()
        .skip(1)
        .any(|t| t.chars().next().is_some_and(char::is_uppercase))
    {
        points += CAPITAL_POINTS;
    }
    CheckworthinessScore(f64::from(points.min(100)) / 100.0)
}

/// Anything that can assign a check-worthiness score to a sentence.
pub trait Scorer: Send + Sync {
    fn score(&self, sentence: &str) -> Result<CheckworthinessScore, ScorerError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicScorer;

impl Scorer for HeuristicScorer {
    fn score(&self, sentence: &str) -> Result<CheckworthinessScore, ScorerError> {
        Ok(heuristic_score(sentence))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorerEndpoint {
    pub url: String,
    #[serde(default = "default_scorer_timeout_ms")]
    pub timeout_ms: u64,
}

fn default_scorer_timeout_ms() -> u64 {
    5_000
}

impl ScorerEndpoint {
    pub fn new(url: impl Into<String>) -> Self {
        Self {
            url: url.into(),
            timeout_ms: default_scorer_timeout_ms(),
        }
    }

    /// Reads the endpoint from `SCORER_URL`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var("SCORER_URL")
            .ok()
            .filter(|u| !u.trim().is_empty())
            .map(Self::new)
    }
}

#[derive(Serialize)]
struct ScoreRequest<'a> {
    sentence: &'a str,
}

#[derive(Deserialize)]
struct ScoreResponse {
    score: serde_json::Value,
}

/// Blocking client for an external scorer. Each request carries its own
/// timeout; the client is safe to share between threads.
#[derive(Debug, Clone)]
pub struct RemoteScorer {
    endpoint: ScorerEndpoint,
    client: reqwest::blocking::Client,
}

impl RemoteScorer {
    pub fn new(endpoint: ScorerEndpoint) -> Result<Self, ScorerError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(endpoint.timeout_ms))
            .build()
            .map_err(|e| ScorerError::Unavailable(e.to_string()))?;
        Ok(Self { endpoint, client })
    }

    pub fn endpoint(&self) -> &ScorerEndpoint {
        &self.endpoint
    }
}

impl Scorer for RemoteScorer {
    fn score(&self, sentence: &str) -> Result<CheckworthinessScore, ScorerError> {
        let response = self
            .client
            .post(&self.endpoint.url)
            .json(&ScoreRequest { sentence })
            .send()
            .map_err(|e| ScorerError::Unavailable(e.to_string()))?;
        if !response.status().is_success() {
            return Err(ScorerError::Unavailable(format!(
                "scorer answered {}",
                response.status()
            )));
        }
        let body = response
            .text()
            .map_err(|e| ScorerError::Unavailable(e.to_string()))?;
        parse_score_response(&body)
    }
}

pub(crate) fn parse_score_response(body: &str) -> Result<CheckworthinessScore, ScorerError> {
    let parsed: ScoreResponse =
        serde_json::from_str(body).map_err(|e| ScorerError::Malformed(e.to_string()))?;
    let value = parsed
        .score
        .as_f64()
        .ok_or_else(|| ScorerError::Malformed(format!("score is not a number: {}", parsed.score)))?;
    CheckworthinessScore::new(value)
        .ok_or_else(|| ScorerError::Malformed(format!("score {value} outside [0, 1]")))
}

/// A sentence that cleared the threshold, with its score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSentence {
    pub text: String,
    pub score: CheckworthinessScore,
}

/// Keeps the sentences whose score is strictly greater than `threshold`, in
/// their original order.
pub fn filter_checkworthy<S, I>(
    sentences: I,
    scorer: &dyn Scorer,
    threshold: f64,
) -> Result<Vec<ScoredSentence>, ScorerError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    if !(0.0..=1.0).contains(&threshold) {
        return Err(ScorerError::InvalidThreshold(threshold));
    }
    let mut kept = Vec::new();
    for sentence in sentences {
        let sentence = sentence.as_ref();
        let score = scorer.score(sentence)?;
        if score.value() > threshold {
            kept.push(ScoredSentence {
                text: sentence.to_string(),
                score,
            });
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use proptest::prelude::*;

    use super::*;

    struct TableScorer(HashMap<&'static str, f64>);

    impl Scorer for TableScorer {
        fn score(&self, sentence: &str) -> Result<CheckworthinessScore, ScorerError> {
            Ok(CheckworthinessScore::new(self.0[sentence]).unwrap())
        }
    }

    #[test]
    fn fact_dense_sentence() {
        let s = heuristic_score("Monkeypox has infected 28,220 people in 88 countries.");
        assert_eq!(s.value(), 0.90);
    }

    #[test]
    fn interjection_and_empty() {
        assert_eq!(heuristic_score("Wow!").value(), 0.30);
        assert_eq!(heuristic_score("").value(), 0.30);
    }

    #[test]
    fn every_feature_clamps_to_one() {
        let s = heuristic_score("In 2022 the WHO declared monkeypox an emergency of concern.");
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn boundary_sentence_is_exactly_point_eight() {
        let s = heuristic_score("Symptoms usually last 2 to 4 weeks according to WHO guidance.");
        assert_eq!(s.value(), 0.8);
    }

    #[test]
    fn verb_matching_strips_punctuation_and_case() {
        assert_eq!(heuristic_score("it wAS,").value(), 0.50);
    }

    #[test]
    fn filter_is_strict() {
        let scorer = TableScorer(HashMap::from([("a", 0.9), ("b", 0.8), ("c", 0.79)]));
        let kept = filter_checkworthy(["a", "b", "c"], &scorer, 0.8).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].text, "a");
    }

    #[test]
    fn filter_empty_and_all_kept() {
        let scorer = TableScorer(HashMap::from([("x", 0.9), ("y", 0.9), ("z", 0.9)]));
        assert!(filter_checkworthy(Vec::<&str>::new(), &scorer, 0.8)
            .unwrap()
            .is_empty());
        let kept = filter_checkworthy(["z", "x", "y"], &scorer, 0.8).unwrap();
        let texts: Vec<_> = kept.iter().map(|k| k.text.as_str()).collect();
        assert_eq!(texts, ["z", "x", "y"]);
    }

    #[test]
    fn filter_rejects_bad_threshold() {
        assert_eq!(
            filter_checkworthy(["x"], &HeuristicScorer, 1.5),
            Err(ScorerError::InvalidThreshold(1.5))
        );
    }

    #[test]
    fn response_parsing() {
        assert_eq!(parse_score_response(r#"{"score": 0.91}"#).unwrap().value(), 0.91);
        assert!(matches!(
            parse_score_response(r#"{"score": 1.7}"#),
            Err(ScorerError::Malformed(_))
        ));
        assert!(matches!(
            parse_score_response(r#"{"score": "high"}"#),
            Err(ScorerError::Malformed(_))
        ));
        assert!(matches!(
            parse_score_response("<html>"),
            Err(ScorerError::Malformed(_))
        ));
    }

    proptest! {
        #[test]
        fn heuristic_in_range_and_deterministic(s in "\\PC{0,120}") {
            let a = heuristic_score(&s);
            prop_assert!((0.0..=1.0).contains(&a.value()));
            prop_assert_eq!(a, heuristic_score(&s));
        }

        #[test]
        fn filter_is_monotone_subsequence(
            words in proptest::collection::vec("[A-Za-z0-9 ]{0,60}", 0..20),
            t1 in 0.0f64..=1.0,
            t2 in 0.0f64..=1.0,
        ) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let low = filter_checkworthy(&words, &HeuristicScorer, lo).unwrap();
            let high = filter_checkworthy(&words, &HeuristicScorer, hi).unwrap();
            // retained(hi) is a subsequence of retained(lo), which is a subsequence of input
            let mut it = low.iter();
            for h in &high {
                prop_assert!(it.any(|l| l == h));
            }
            let mut it = words.iter();
            for l in &low {
                prop_assert!(it.any(|w| *w == l.text));
            }
        }
    }
}
