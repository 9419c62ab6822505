//! Approximate word-overlap similarity between a headline and vetted claims.
//!
//! Two tokens match when they are equal, or both have at least five
//! characters and are one edit apart. The score is a Dice-style ratio over a
//! maximum matching of the two token multisets, scaled to 0..=100.

use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::classifier::tokenize;
use crate::corpus::{Corpus, VettedClaim};

pub const DEFAULT_THRESHOLD: u8 = 50;
pub const DEFAULT_PAGE_SIZE: usize = 5;

const FUZZY_MIN_LEN: usize = 5;

/// Integer similarity in `0..=100`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityScore(u8);

impl SimilarityScore {
    pub fn new(value: u8) -> Option<Self> {
        (value <= 100).then_some(Self(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

pub fn token_match(a: &str, b: &str) -> bool {
    a == b
        || (a.chars().count() >= FUZZY_MIN_LEN
            && b.chars().count() >= FUZZY_MIN_LEN
            && strsim::levenshtein(a, b) <= 1)
}

/// Size of a maximum matching between `left` and `right` under
/// [`token_match`], found with augmenting paths.
pub fn max_matching<L: AsRef<str>, R: AsRef<str>>(left: &[L], right: &[R]) -> usize {
    let adjacency: Vec<Vec<usize>> = left
        .iter()
        .map(|a| {
            right
                .iter()
                .enumerate()
                .filter(|(_, b)| token_match(a.as_ref(), b.as_ref()))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    fn augment(
        u: usize,
        adjacency: &[Vec<usize>],
        visited: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &v in &adjacency[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if owner[v].is_none_or(|w| augment(w, adjacency, visited, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut owner = vec![None; right.len()];
    let mut size = 0;
    for u in 0..left.len() {
        let mut visited = vec![false; right.len()];
        if augment(u, &adjacency, &mut visited, &mut owner) {
            size += 1;
        }
    }
    size
}

fn score_tokens(a: &[String], b: &[String]) -> SimilarityScore {
    let total = a.len() + b.len();
    if total == 0 {
        return SimilarityScore(0);
    }
    let m = max_matching(a, b);
    // round(100 * 2m / total), half rounding up
    let scaled = (400 * m + total) / (2 * total);
    SimilarityScore(scaled as u8)
}

pub fn similarity_score(a: &str, b: &str) -> SimilarityScore {
    score_tokens(&tokenize(a), &tokenize(b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarMatch {
    pub claim: VettedClaim,
    pub score: SimilarityScore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page {
    pub items: Vec<SimilarMatch>,
    pub page_index: usize,
    pub page_size: usize,
    pub total_matches: usize,
}

/// Every claim scoring strictly above `threshold`, best first; equal scores
/// are ordered by claim id.
pub fn rank_similar(headline: &str, claims: &[VettedClaim], threshold: u8) -> Vec<SimilarMatch> {
    let query = tokenize(headline);
    let mut matches: Vec<SimilarMatch> = claims
        .iter()
        .filter_map(|claim| {
            let score = score_tokens(&query, &tokenize(&claim.text));
            (score.value() > threshold).then(|| SimilarMatch {
                claim: claim.clone(),
                score,
            })
        })
        .collect();
    matches.sort_by(|x, y| {
        (Reverse(x.score), &x.claim.id).cmp(&(Reverse(y.score), &y.claim.id))
    });
    matches
}

/// One page of [`rank_similar`]. A page past the end is empty but still
/// reports `total_matches`. `page_size` of zero is treated as one.
pub fn get_similar_claims(
    headline: &str,
    corpus: &Corpus,
    threshold: u8,
    page_index: usize,
    page_size: usize,
) -> Page {
    let page_size = page_size.max(1);
    let all = rank_similar(headline, corpus.claims(), threshold);
    let total_matches = all.len();
    let items = all
        .into_iter()
        .skip(page_index.saturating_mul(page_size))
        .take(page_size)
        .collect();
    Page {
        items,
        page_index,
        page_size,
        total_matches,
    }
}
