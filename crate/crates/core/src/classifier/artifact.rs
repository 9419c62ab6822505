use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::logistic::{sigmoid, ClassWeights};
use super::vocab::TokenVocabulary;
use super::{Classifier, ClassifierError, Prediction};
use crate::corpus::Verdict;

pub const FORMAT_VERSION: u32 = 1;

// Keeps probabilities strictly inside (0, 1) when the margin saturates.
const PROBABILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub seed: u64,
    pub min_df: usize,
    pub class_weighting: bool,
    pub class_weights: ClassWeights,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub corpus_digest: String,
    pub examples: usize,
    pub true_examples: usize,
    pub false_examples: usize,
    /// RFC 3339 time the artifact was stamped. Left empty by training itself
    /// so identical inputs produce identical files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trained_at: Option<String>,
}

/// Trained logistic-regression classifier, persisted as self-describing JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format_version: u32,
    pub vocabulary: TokenVocabulary,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyperparameters: Hyperparameters,
    pub metadata: TrainingMetadata,
}

impl ModelArtifact {
    pub fn probability(&self, text: &str) -> f64 {
        let z = self.bias
            + self
                .vocabulary
                .features(text)
                .into_iter()
                .map(|j| self.weights[j])
                .sum::<f64>();
        sigmoid(z).clamp(PROBABILITY_FLOOR, 1.0 - PROBABILITY_FLOOR)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }

    pub fn from_json(raw: &str) -> Result<Self, ClassifierError> {
        let value: serde_json::Value =
            serde_json::from_str(raw).map_err(|e| ClassifierError::CorruptArtifact(e.to_string()))?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| ClassifierError::CorruptArtifact("missing format_version".into()))?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(ClassifierError::UnrecognizedFormatVersion(version));
        }
        let artifact: ModelArtifact = serde_json::from_value(value)
            .map_err(|e| ClassifierError::CorruptArtifact(e.to_string()))?;
        let vocabulary = artifact
            .vocabulary
            .reindex()
            .map_err(ClassifierError::CorruptArtifact)?;
        if artifact.weights.len() != vocabulary.len() {
            return Err(ClassifierError::CorruptArtifact(format!(
                "{} weights for a vocabulary of {}",
                artifact.weights.len(),
                vocabulary.len()
            )));
        }
        if !artifact.bias.is_finite() || artifact.weights.iter().any(|w| !w.is_finite()) {
            return Err(ClassifierError::CorruptArtifact("non-finite parameter".into()));
        }
        Ok(ModelArtifact {
            vocabulary,
            ..artifact
        })
    }
}

impl Classifier for ModelArtifact {
    fn predict(&self, text: &str) -> Prediction {
        let probability = self.probability(text);
        Prediction {
            verdict: Verdict::from_bool(probability >= 0.5),
            probability,
        }
    }
}

/// Writes the artifact through a temporary file and a rename.
pub fn save_model(model: &ModelArtifact, path: &Path) -> Result<(), ClassifierError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(model.to_json().as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<ModelArtifact, ClassifierError> {
    let bytes = fs::read(path)?;
    let raw = String::from_utf8(bytes).map_err(|e| ClassifierError::CorruptArtifact(e.to_string()))?;
    ModelArtifact::from_json(&raw)
}
