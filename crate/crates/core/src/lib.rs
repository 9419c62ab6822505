//! Claim-verification building blocks: a vetted claim corpus, check-worthiness
//! scoring, a trainable true/false classifier, fuzzy similar-claim lookup,
//! headline extraction and a durable crowdsourced vote store.

pub mod checkworthiness;
pub mod classifier;
pub mod corpus;
pub mod headline;
pub mod similarity;
pub mod votestore;
