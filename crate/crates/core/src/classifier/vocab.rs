use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::ClassifierError;
use crate::corpus::VettedClaim;

/// Lowercases, turns every non-alphanumeric character into a separator and
/// splits on whitespace.
pub fn tokenize(text: &str) -> Vec<String> {
    text.chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect::<String>()
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

/// Token to feature-index map with dense indices `0..len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenVocabulary {
    tokens: Vec<String>,
    document_frequency: Vec<usize>,
    min_df: usize,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl TokenVocabulary {
    pub(crate) fn from_parts(
        tokens: Vec<String>,
        document_frequency: Vec<usize>,
        min_df: usize,
    ) -> Result<Self, String> {
        if tokens.len() != document_frequency.len() {
            return Err(format!(
                "{} tokens but {} document frequencies",
                tokens.len(),
                document_frequency.len()
            ));
        }
        if let Some(df) = document_frequency.iter().find(|&&df| df < min_df) {
            return Err(format!("document frequency {df} below min_df {min_df}"));
        }
        let index: HashMap<String, usize> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        if index.len() != tokens.len() {
            return Err("duplicate token in vocabulary".into());
        }
        Ok(Self {
            tokens,
            document_frequency,
            min_df,
            index,
        })
    }

    /// Rebuilds the lookup table after deserialization.
    pub(crate) fn reindex(self) -> Result<Self, String> {
        Self::from_parts(self.tokens, self.document_frequency, self.min_df)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn min_df(&self) -> usize {
        self.min_df
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn document_frequency(&self, token: &str) -> Option<usize> {
        self.index_of(token).map(|i| self.document_frequency[i])
    }

    /// Sorted, distinct feature indices present in `text` (binary bag of
    /// words). Unknown tokens are ignored.
    pub fn features(&self, text: &str) -> Vec<usize> {
        let mut idx: Vec<usize> = tokenize(text)
            .iter()
            .filter_map(|t| self.index_of(t))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }
}

/// Builds the vocabulary from claim texts, ordered by first occurrence and
/// keeping tokens that occur in at least `min_df` claims.
pub fn build_vocab(claims: &[VettedClaim], min_df: usize) -> Result<TokenVocabulary, ClassifierError> {
    if claims.is_empty() {
        return Err(ClassifierError::EmptyCorpus);
    }
    if min_df == 0 {
        return Err(ClassifierError::InvalidConfig("min_df must be positive".into()));
    }
    let mut order: Vec<String> = Vec::new();
    let mut df: HashMap<String, usize> = HashMap::new();
    for claim in claims {
        let distinct: HashSet<String> = tokenize(&claim.text).into_iter().collect();
        for token in tokenize(&claim.text) {
            if !df.contains_key(&token) {
                df.insert(token.clone(), 0);
                order.push(token);
            }
        }
        for token in distinct {
            *df.get_mut(&token).expect("inserted above") += 1;
        }
    }
    let (tokens, freqs): (Vec<String>, Vec<usize>) = order
        .into_iter()
        .filter_map(|t| {
            let f = df[&t];
            (f >= min_df).then_some((t, f))
        })
        .unzip();
    TokenVocabulary::from_parts(tokens, freqs, min_df).map_err(ClassifierError::InvalidConfig)
}
