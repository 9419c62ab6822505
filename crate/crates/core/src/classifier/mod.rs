//! Binary true/false claim classification.
//!
//! The shipped model is logistic regression over binary bag-of-words
//! features. Anything implementing [`Trainer`] can be cross-validated with
//! [`cross_validate_with`].

mod artifact;
mod crossval;
mod logistic;
mod vocab;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use artifact::{
    load_model, save_model, Hyperparameters, ModelArtifact, TrainingMetadata, FORMAT_VERSION,
};
pub use crossval::{
    cross_validate, cross_validate_with, stratified_folds, Confusion, CvReport, FoldResult,
};
pub use logistic::{train, ClassWeights, LogisticObjective, TrainConfig};
pub use vocab::{build_vocab, tokenize, TokenVocabulary};

use crate::corpus::{Verdict, VettedClaim};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("corpus contains a single verdict class")]
    SingleClassCorpus,
    #[error("too few examples: {0}")]
    TooFewExamples(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unrecognized model format version {0}")]
    UnrecognizedFormatVersion(u64),
    #[error("corrupt model artifact: {0}")]
    CorruptArtifact(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub verdict: Verdict,
    pub probability: f64,
}

pub trait Classifier {
    fn predict(&self, text: &str) -> Prediction;
}

pub trait Trainer {
    type Model: Classifier;

    fn fit(&self, claims: &[VettedClaim]) -> Result<Self::Model, ClassifierError>;
}

/// Trains [`ModelArtifact`]s with a fixed config.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogisticTrainer(pub TrainConfig);

impl Trainer for LogisticTrainer {
    type Model = ModelArtifact;

    fn fit(&self, claims: &[VettedClaim]) -> Result<ModelArtifact, ClassifierError> {
        train(claims, &self.0)
    }
}

/// Always answers with the training set's majority verdict (true on ties).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorityModel {
    pub verdict: Verdict,
    pub probability: f64,
}

impl Classifier for MajorityModel {
    fn predict(&self, _text: &str) -> Prediction {
        Prediction {
            verdict: self.verdict,
            probability: self.probability,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MajorityTrainer;

impl Trainer for MajorityTrainer {
    type Model = MajorityModel;

    fn fit(&self, claims: &[VettedClaim]) -> Result<MajorityModel, ClassifierError> {
        if claims.is_empty() {
            return Err(ClassifierError::EmptyCorpus);
        }
        let n_true = claims.iter().filter(|c| c.verdict == Verdict::True).count();
        let share = n_true as f64 / claims.len() as f64;
        Ok(MajorityModel {
            verdict: Verdict::from_bool(share >= 0.5),
            probability: share,
        })
    }
}
