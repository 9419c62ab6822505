//! Vetted claim corpus: feed and article ingestion, rating normalization,
//! deduplication and JSONL persistence.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::checkworthiness::{CheckworthinessScore, Scorer, ScorerError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown rating label {0:?}")]
    UnknownLabel(String),
    #[error("malformed feed at line {line}: {reason}")]
    MalformedFeed { line: usize, reason: String },
    #[error("malformed article at line {line}: {reason}")]
    MalformedArticle { line: usize, reason: String },
    #[error("invalid claim: {0}")]
    InvalidClaim(String),
    #[error("duplicate claim id {0}")]
    DuplicateId(String),
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error(transparent)]
    Scorer(#[from] ScorerError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Source rating labels recognized by the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatingLabel {
    NoEvidence,
    False,
    Inaccurate,
    MostlyFalse,
    Misleading,
    Incorrect,
    HalfTrue,
    NotRequired,
    Unsupported,
    NeedsContext,
    True,
}

impl RatingLabel {
    pub const ALL: [RatingLabel; 11] = [
        RatingLabel::NoEvidence,
        RatingLabel::False,
        RatingLabel::Inaccurate,
        RatingLabel::MostlyFalse,
        RatingLabel::Misleading,
        RatingLabel::Incorrect,
        RatingLabel::HalfTrue,
        RatingLabel::NotRequired,
        RatingLabel::Unsupported,
        RatingLabel::NeedsContext,
        RatingLabel::True,
    ];

    /// Human phrase, e.g. `"no evidence"`.
    pub fn phrase(self) -> &'static str {
        match self {
            RatingLabel::NoEvidence => "no evidence",
            RatingLabel::False => "false",
            RatingLabel::Inaccurate => "inaccurate",
            RatingLabel::MostlyFalse => "mostly false",
            RatingLabel::Misleading => "misleading",
            RatingLabel::Incorrect => "incorrect",
            RatingLabel::HalfTrue => "half true",
            RatingLabel::NotRequired => "not required",
            RatingLabel::Unsupported => "unsupported",
            RatingLabel::NeedsContext => "needs context",
            RatingLabel::True => "true",
        }
    }

    pub fn verdict(self) -> Verdict {
        if self == RatingLabel::True {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl fmt::Display for RatingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phrase())
    }
}

// Lowercase, treat '-' and '_' as spaces, collapse whitespace.
fn normalize_phrase(s: &str) -> String {
    s.to_lowercase()
        .replace(['-', '_'], " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

impl FromStr for RatingLabel {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = normalize_phrase(s);
        RatingLabel::ALL
            .into_iter()
            .find(|l| l.phrase() == key)
            .ok_or_else(|| CorpusError::UnknownLabel(s.to_string()))
    }
}

/// Binary collapse of a rating. Serialized as `1` (true) and `0` (false).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    False,
    True,
}

impl Verdict {
    pub fn as_u8(self) -> u8 {
        match self {
            Verdict::False => 0,
            Verdict::True => 1,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.as_u8())
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match u8::deserialize(deserializer)? {
            0 => Ok(Verdict::False),
            1 => Ok(Verdict::True),
            other => Err(serde::de::Error::custom(format!(
                "verdict must be 0 or 1, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
        })
    }
}

/// Collapses a source rating into a binary verdict.
pub fn normalize_label(label: &str) -> Result<Verdict, CorpusError> {
    label.parse::<RatingLabel>().map(RatingLabel::verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimSource {
    FactCheckFeed,
    AuthoritativeArticle,
}

impl ClaimSource {
    fn id_prefix(self) -> &'static str {
        match self {
            ClaimSource::FactCheckFeed => "fc",
            ClaimSource::AuthoritativeArticle => "aa",
        }
    }
}

impl fmt::Display for ClaimSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimSource::FactCheckFeed => "fact-check-feed",
            ClaimSource::AuthoritativeArticle => "authoritative-article",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VettedClaim {
    pub id: String,
    pub text: String,
    pub source: ClaimSource,
    pub source_url: String,
    pub original_label: RatingLabel,
    pub verdict: Verdict,
    #[serde(default)]
    pub checkworthiness: Option<CheckworthinessScore>,
    pub language: String,
}

/// Case-folded, whitespace-collapsed claim text used for deduplication.
pub fn dedup_key(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

impl VettedClaim {
    /// Builds a claim whose id is derived from its normalized text.
    pub fn new(
        text: &str,
        source: ClaimSource,
        source_url: impl Into<String>,
        original_label: RatingLabel,
        checkworthiness: Option<CheckworthinessScore>,
        language: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(CorpusError::InvalidClaim("empty claim text".into()));
        }
        let digest = Sha256::digest(dedup_key(text).as_bytes());
        let claim = VettedClaim {
            id: format!("{}-{}", source.id_prefix(), &hex::encode(digest)[..12]),
            text: text.to_string(),
            source,
            source_url: source_url.into(),
            original_label,
            verdict: original_label.verdict(),
            checkworthiness,
            language: language.into(),
        };
        claim.validate()?;
        Ok(claim)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.text.trim().is_empty() || self.text.trim() != self.text {
            return Err(CorpusError::InvalidClaim(format!(
                "{}: text must be non-empty and trimmed",
                self.id
            )));
        }
        if self.verdict != self.original_label.verdict() {
            return Err(CorpusError::InvalidClaim(format!(
                "{}: verdict {} does not match label {}",
                self.id, self.verdict, self.original_label
            )));
        }
        if self.source == ClaimSource::AuthoritativeArticle
            && (self.verdict != Verdict::True || self.checkworthiness.is_none())
        {
            return Err(CorpusError::InvalidClaim(format!(
                "{}: article claims must be true and carry a check-worthiness score",
                self.id
            )));
        }
        Ok(())
    }

    pub fn dedup_key(&self) -> String {
        dedup_key(&self.text)
    }
}

/// Where a batch of claims came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub source_file: String,
    pub sha256: String,
    pub ingested_at: String,
    pub kind: ClaimSource,
    pub claims_added: usize,
}

impl ProvenanceEntry {
    pub fn for_bytes(
        source_file: impl Into<String>,
        bytes: &[u8],
        kind: ClaimSource,
        claims_added: usize,
        at: DateTime<Utc>,
    ) -> Self {
        ProvenanceEntry {
            source_file: source_file.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
            ingested_at: at.to_rfc3339_opts(SecondsFormat::Secs, true),
            kind,
            claims_added,
        }
    }
}

/// Ordered, deduplicated claim collection.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    claims: Vec<VettedClaim>,
    keys: HashSet<String>,
    ids: HashSet<String>,
    pub provenance: Vec<ProvenanceEntry>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a corpus, silently dropping text duplicates.
    pub fn from_claims(claims: impl IntoIterator<Item = VettedClaim>) -> Result<Self, CorpusError> {
        let mut corpus = Corpus::new();
        corpus.extend(claims)?;
        Ok(corpus)
    }

    /// Adds a claim. Returns `Ok(false)` when its normalized text is already present.
    pub fn insert(&mut self, claim: VettedClaim) -> Result<bool, CorpusError> {
        claim.validate()?;
        let key = claim.dedup_key();
        if self.keys.contains(&key) {
            return Ok(false);
        }
        if self.ids.contains(&claim.id) {
            return Err(CorpusError::DuplicateId(claim.id));
        }
        self.keys.insert(key);
        self.ids.insert(claim.id.clone());
        self.claims.push(claim);
        Ok(true)
    }

    /// Inserts every claim and returns how many were new.
    pub fn extend(
        &mut self,
        claims: impl IntoIterator<Item = VettedClaim>,
    ) -> Result<usize, CorpusError> {
        let mut added = 0;
        for claim in claims {
            if self.insert(claim)? {
                added += 1;
            }
        }
        Ok(added)
    }

    pub fn claims(&self) -> &[VettedClaim] {
        &self.claims
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, VettedClaim> {
        self.claims.iter()
    }

    /// SHA-256 over the serialized claim lines.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for claim in &self.claims {
            hasher.update(serde_json::to_vec(claim).expect("claim serializes"));
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }

    /// Writes the claims as JSON Lines plus a `<file>.stats.json` sidecar.
    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        let file = fs::File::create(path).map_err(io_err(path))?;
        let mut out = BufWriter::new(file);
        for claim in &self.claims {
            serde_json::to_writer(&mut out, claim).expect("claim serializes");
            out.write_all(b"\n").map_err(io_err(path))?;
        }
        out.flush().map_err(io_err(path))?;

        let sidecar = stats_path(path);
        let report = StatsSidecar {
            stats: corpus_stats(self),
            corpus_sha256: self.digest(),
            provenance: self.provenance.clone(),
        };
        let json = serde_json::to_string_pretty(&report).expect("stats serialize");
        fs::write(&sidecar, json + "\n").map_err(io_err(&sidecar))?;
        Ok(())
    }

    /// Loads a corpus written by [`Corpus::save`]. The sidecar is optional.
    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let file = fs::File::open(path).map_err(io_err(path))?;
        let mut corpus = Corpus::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io_err(path))?;
            if line.trim().is_empty() {
                continue;
            }
            let claim: VettedClaim = serde_json::from_str(&line).map_err(|e| {
                CorpusError::InvalidClaim(format!("{}:{}: {e}", path.display(), i + 1))
            })?;
            corpus.insert(claim)?;
        }
        let sidecar = stats_path(path);
        if let Ok(raw) = fs::read_to_string(&sidecar) {
            if let Ok(report) = serde_json::from_str::<StatsSidecar>(&raw) {
                corpus.provenance = report.provenance;
            }
        }
        Ok(corpus)
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a VettedClaim;
    type IntoIter = std::slice::Iter<'a, VettedClaim>;

    fn into_iter(self) -> Self::IntoIter {
        self.claims.iter()
    }
}

pub fn stats_path(corpus_path: &Path) -> PathBuf {
    let mut name = corpus_path.as_os_str().to_owned();
    name.push(".stats.json");
    PathBuf::from(name)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StatsSidecar {
    stats: CorpusStats,
    corpus_sha256: String,
    #[serde(default)]
    provenance: Vec<ProvenanceEntry>,
}

/// Splits text after every `.`, `?` and `!`. Fragments are trimmed, empty
/// ones dropped, and the terminal punctuation stays on its sentence.
pub fn split_sentences(text: &str) -> Vec<String> {
    text.split_inclusive(['.', '?', '!'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// One record of a fact-check feed snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedRecord {
    pub claim_text: String,
    pub rating: String,
    pub language: String,
    pub source_url: String,
    pub review_url: String,
}

/// One scraped article.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub url: String,
    #[serde(default)]
    pub title: String,
    pub body: String,
}

/// Maps sentence-length ratings onto one of the short labels.
///
/// A rating matches an alias when its normalized form starts with the alias
/// pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAliases {
    entries: Vec<(String, RatingLabel)>,
}

impl Default for LabelAliases {
    fn default() -> Self {
        let defaults = [
            ("there is no evidence", RatingLabel::NoEvidence),
            ("no evidence", RatingLabel::NoEvidence),
            ("this is false", RatingLabel::False),
            ("this claim is false", RatingLabel::False),
            ("pants on fire", RatingLabel::False),
            ("fake", RatingLabel::False),
            ("this claim is misleading", RatingLabel::Misleading),
            ("this is misleading", RatingLabel::Misleading),
            ("partly false", RatingLabel::MostlyFalse),
            ("mostly false", RatingLabel::MostlyFalse),
            ("missing context", RatingLabel::NeedsContext),
            ("lacks context", RatingLabel::NeedsContext),
            ("needs context", RatingLabel::NeedsContext),
            ("unproven", RatingLabel::Unsupported),
            ("unsupported", RatingLabel::Unsupported),
        ];
        Self {
            entries: defaults
                .into_iter()
                .map(|(p, l)| (p.to_string(), l))
                .collect(),
        }
    }
}

impl LabelAliases {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn with(mut self, pattern: &str, label: RatingLabel) -> Self {
        self.entries.push((normalize_phrase(pattern), label));
        self
    }

    /// Resolves a raw rating: exact label match first, then alias prefixes.
    pub fn resolve(&self, rating: &str) -> Result<RatingLabel, CorpusError> {
        if let Ok(label) = rating.parse::<RatingLabel>() {
            return Ok(label);
        }
        let key = normalize_phrase(rating);
        self.entries
            .iter()
            .find(|(pattern, _)| {
                key.strip_prefix(pattern.as_str())
                    .is_some_and(|rest| rest.chars().next().is_none_or(|c| !c.is_alphanumeric()))
            })
            .map(|(_, label)| *label)
            .ok_or_else(|| CorpusError::UnknownLabel(rating.to_string()))
    }
}

/// A record that could not be ingested, kept for the reject report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejected {
    pub line: usize,
    pub reason: String,
    pub record: String,
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub claims: Vec<VettedClaim>,
    pub rejected: Vec<Rejected>,
    /// Records skipped because their language is not English.
    pub skipped_language: usize,
    /// Records dropped as text duplicates.
    pub duplicates: usize,
}

fn is_english(tag: &str) -> bool {
    let tag = tag.trim().to_ascii_lowercase();
    tag == "en" || tag.starts_with("en-") || tag.starts_with("en_")
}

/// Ingests a JSON Lines fact-check feed.
///
/// A line that is not valid JSON fails the whole feed; a record whose rating
/// cannot be resolved is quarantined into [`Ingested::rejected`].
pub fn ingest_factcheck_feed(feed: &str, aliases: &LabelAliases) -> Result<Ingested, CorpusError> {
    let mut out = Ingested::default();
    let mut seen = HashSet::new();
    for (i, line) in feed.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: FeedRecord =
            serde_json::from_str(line).map_err(|e| CorpusError::MalformedFeed {
                line: i + 1,
                reason: e.to_string(),
            })?;
        if !is_english(&record.language) {
            out.skipped_language += 1;
            continue;
        }
        let claim = aliases.resolve(&record.rating).and_then(|label| {
            VettedClaim::new(
                &record.claim_text,
                ClaimSource::FactCheckFeed,
                record.source_url.clone(),
                label,
                None,
                record.language.trim(),
            )
        });
        match claim {
            Ok(claim) => {
                if seen.insert(claim.dedup_key()) {
                    out.claims.push(claim);
                } else {
                    out.duplicates += 1;
                }
            }
            Err(err) => out.rejected.push(Rejected {
                line: i + 1,
                reason: err.to_string(),
                record: line.to_string(),
            }),
        }
    }
    Ok(out)
}

/// Parses an article dump; malformed lines are quarantined.
pub fn parse_articles(dump: &str) -> (Vec<ArticleRecord>, Vec<Rejected>) {
    let mut articles = Vec::new();
    let mut rejected = Vec::new();
    for (i, line) in dump.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ArticleRecord>(line) {
            Ok(a) => articles.push(a),
            Err(e) => rejected.push(Rejected {
                line: i + 1,
                reason: CorpusError::MalformedArticle {
                    line: i + 1,
                    reason: e.to_string(),
                }
                .to_string(),
                record: line.to_string(),
            }),
        }
    }
    (articles, rejected)
}

/// Turns authoritative articles into true-labeled claims: every sentence
/// scoring strictly above `threshold` is kept.
pub fn ingest_articles(
    articles: &[ArticleRecord],
    scorer: &dyn Scorer,
    threshold: f64,
) -> Result<Ingested, CorpusError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(CorpusError::InvalidThreshold(threshold));
    }
    let mut out = Ingested::default();
    let mut seen = HashSet::new();
    for article in articles {
        let sentences = split_sentences(&article.body);
        let kept = crate::checkworthiness::filter_checkworthy(&sentences, scorer, threshold)?;
        for sentence in kept {
            let claim = VettedClaim::new(
                &sentence.text,
                ClaimSource::AuthoritativeArticle,
                article.url.clone(),
                RatingLabel::True,
                Some(sentence.score),
                "en",
            )?;
            if seen.insert(claim.dedup_key()) {
                out.claims.push(claim);
            } else {
                out.duplicates += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total: usize,
    pub by_verdict: BTreeMap<String, usize>,
    pub by_source: BTreeMap<String, usize>,
    pub by_label: BTreeMap<String, usize>,
}

impl CorpusStats {
    pub fn verdict_count(&self, verdict: Verdict) -> usize {
        self.by_verdict
            .get(&verdict.to_string())
            .copied()
            .unwrap_or(0)
    }

    pub fn source_count(&self, source: ClaimSource) -> usize {
        self.by_source.get(&source.to_string()).copied().unwrap_or(0)
    }
}

pub fn corpus_stats<'a>(claims: impl IntoIterator<Item = &'a VettedClaim>) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for v in [Verdict::True, Verdict::False] {
        stats.by_verdict.insert(v.to_string(), 0);
    }
    for s in [ClaimSource::FactCheckFeed, ClaimSource::AuthoritativeArticle] {
        stats.by_source.insert(s.to_string(), 0);
    }
    for claim in claims {
        stats.total += 1;
        *stats.by_verdict.entry(claim.verdict.to_string()).or_default() += 1;
        *stats.by_source.entry(claim.source.to_string()).or_default() += 1;
        *stats
            .by_label
            .entry(claim.original_label.phrase().to_string())
            .or_default() += 1;
    }
    stats
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::checkworthiness::HeuristicScorer;

    fn feed_line(text: &str, rating: &str, lang: &str) -> String {
        serde_json::to_string(&FeedRecord {
            claim_text: text.into(),
            rating: rating.into(),
            language: lang.into(),
            source_url: "https://example.org/post".into(),
            review_url: "https://example.org/review".into(),
        })
        .unwrap()
    }

    #[test]
    fn label_examples() {
        assert_eq!(normalize_label("true").unwrap(), Verdict::True);
        assert_eq!(normalize_label("half true").unwrap(), Verdict::False);
        assert_eq!(normalize_label("No Evidence ").unwrap(), Verdict::False);
        assert!(matches!(
            normalize_label("satire"),
            Err(CorpusError::UnknownLabel(_))
        ));
        assert!(normalize_label("").is_err());
    }

    #[test]
    fn kebab_spelling_is_accepted() {
        assert_eq!("needs-context".parse::<RatingLabel>().unwrap(), RatingLabel::NeedsContext);
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            split_sentences("Monkeypox is a virus. It spreads between people."),
            ["Monkeypox is a virus.", "It spreads between people."]
        );
        assert!(split_sentences("").is_empty());
        assert_eq!(
            split_sentences("Cases rose approx. 40 percent!"),
            ["Cases rose approx.", "40 percent!"]
        );
        assert_eq!(split_sentences("Really?! Yes"), ["Really?", "!", "Yes"]);
    }

    #[test]
    fn feed_language_filter() {
        let feed = [
            feed_line("Claim one is here", "false", "en"),
            feed_line("Afirmación dos", "false", "es"),
            feed_line("Claim three is here", "true", "en-GB"),
        ]
        .join("\n");
        let out = ingest_factcheck_feed(&feed, &LabelAliases::default()).unwrap();
        assert_eq!(out.claims.len(), 2);
        assert_eq!(out.skipped_language, 1);
    }

    #[test]
    fn sentence_rating_is_aliased() {
        let feed = feed_line("Vaccines cause it", "There is no evidence this is true.", "en");
        let out = ingest_factcheck_feed(&feed, &LabelAliases::default()).unwrap();
        assert_eq!(out.claims[0].original_label, RatingLabel::NoEvidence);
        assert_eq!(out.claims[0].verdict, Verdict::False);
    }

    #[test]
    fn alias_needs_word_boundary() {
        let aliases = LabelAliases::empty().with("fake", RatingLabel::False);
        assert!(aliases.resolve("fakeish").is_err());
        assert_eq!(aliases.resolve("Fake news.").unwrap(), RatingLabel::False);
    }

    #[test]
    fn unknown_label_is_quarantined() {
        let feed = [
            feed_line("A claim", "satire", "en"),
            feed_line("B claim", "false", "en"),
        ]
        .join("\n");
        let out = ingest_factcheck_feed(&feed, &LabelAliases::default()).unwrap();
        assert_eq!(out.claims.len(), 1);
        assert_eq!(out.rejected.len(), 1);
        assert_eq!(out.rejected[0].line, 1);
    }

    #[test]
    fn malformed_feed_fails() {
        let err = ingest_factcheck_feed("{not json", &LabelAliases::default()).unwrap_err();
        assert!(matches!(err, CorpusError::MalformedFeed { line: 1, .. }));
    }

    #[test]
    fn empty_text_is_rejected() {
        let out =
            ingest_factcheck_feed(&feed_line("   ", "false", "en"), &LabelAliases::default())
                .unwrap();
        assert!(out.claims.is_empty());
        assert_eq!(out.rejected.len(), 1);
    }

    #[test]
    fn article_threshold_is_strict() {
        let boundary = "Symptoms usually last 2 to 4 weeks according to WHO guidance.";
        let strong = "Monkeypox has infected 28,220 people in 88 countries.";
        let article = ArticleRecord {
            url: "https://who.example/a".into(),
            title: String::new(),
            body: format!("{boundary} {strong} {strong}"),
        };
        let out = ingest_articles(&[article], &HeuristicScorer, 0.8).unwrap();
        assert_eq!(out.claims.len(), 1);
        assert_eq!(out.claims[0].text, strong);
        assert_eq!(out.claims[0].verdict, Verdict::True);
        assert_eq!(out.duplicates, 1);
        assert!(ingest_articles(&[], &HeuristicScorer, 0.8).unwrap().claims.is_empty());
    }

    #[test]
    fn malformed_article_is_quarantined() {
        let dump = "{\"url\":\"u\",\"title\":\"t\",\"body\":\"b.\"}\n{\"url\":3}\n";
        let (articles, rejected) = parse_articles(dump);
        assert_eq!(articles.len(), 1);
        assert_eq!(rejected.len(), 1);
        assert_eq!(rejected[0].line, 2);
    }

    #[test]
    fn stats_of_empty_corpus() {
        let stats = corpus_stats(&Corpus::new());
        assert_eq!(stats.total, 0);
        assert_eq!(stats.verdict_count(Verdict::True), 0);
        assert_eq!(stats.verdict_count(Verdict::False), 0);
        assert_eq!(stats.source_count(ClaimSource::FactCheckFeed), 0);
    }

    #[test]
    fn corpus_dedups_normalized_text() {
        let a = VettedClaim::new("Hello  World", ClaimSource::FactCheckFeed, "u", RatingLabel::False, None, "en").unwrap();
        let b = VettedClaim::new("hello world", ClaimSource::FactCheckFeed, "u", RatingLabel::True, None, "en").unwrap();
        let corpus = Corpus::from_claims([a, b]).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.claims()[0].verdict, Verdict::False);
    }

    #[test]
    fn article_claim_invariant() {
        let mut claim = VettedClaim::new(
            "x is 1",
            ClaimSource::AuthoritativeArticle,
            "u",
            RatingLabel::True,
            CheckworthinessScore::new(0.9),
            "en",
        )
        .unwrap();
        claim.original_label = RatingLabel::False;
        claim.verdict = Verdict::False;
        assert!(claim.validate().is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        let mut corpus = Corpus::from_claims([
            VettedClaim::new("one", ClaimSource::FactCheckFeed, "u", RatingLabel::Misleading, None, "en").unwrap(),
            VettedClaim::new("two is 2", ClaimSource::AuthoritativeArticle, "v", RatingLabel::True, CheckworthinessScore::new(0.85), "en").unwrap(),
        ])
        .unwrap();
        corpus.provenance.push(ProvenanceEntry::for_bytes("f", b"abc", ClaimSource::FactCheckFeed, 1, Utc::now()));
        corpus.save(&path).unwrap();
        let loaded = Corpus::load(&path).unwrap();
        assert_eq!(loaded.claims(), corpus.claims());
        assert_eq!(loaded.provenance, corpus.provenance);
        assert!(stats_path(&path).exists());
        let line = fs::read_to_string(&path).unwrap();
        assert!(line.contains("\"verdict\":0"));
        assert!(line.contains("\"original_label\":\"misleading\""));
    }

    proptest! {
        #[test]
        fn split_preserves_non_whitespace(text in "[a-zA-Z0-9 .?!,\\n]{0,200}") {
            let joined = split_sentences(&text).join(" ");
            let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
            prop_assert_eq!(strip(&joined), strip(&text));
        }

        #[test]
        fn verdict_always_matches_label(idx in 0usize..11, text in "[a-z]{1,10}( [a-z]{1,10}){0,5}") {
            let label = RatingLabel::ALL[idx];
            let feed = serde_json::to_string(&FeedRecord {
                claim_text: text,
                rating: label.phrase().to_uppercase(),
                language: "en".into(),
                source_url: String::new(),
                review_url: String::new(),
            }).unwrap();
            let out = ingest_factcheck_feed(&feed, &LabelAliases::default()).unwrap();
            prop_assert_eq!(out.claims[0].verdict, normalize_label(label.phrase()).unwrap());
        }
    }
}
