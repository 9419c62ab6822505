use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::artifact::{Hyperparameters, ModelArtifact, TrainingMetadata, FORMAT_VERSION};
use super::vocab::{build_vocab, TokenVocabulary};
use super::ClassifierError;
use crate::corpus::{Verdict, VettedClaim};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub seed: u64,
    pub class_weighting: bool,
    pub min_df: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 200,
            learning_rate: 0.1,
            l2: 1e-4,
            seed: 0,
            class_weighting: true,
            min_df: 1,
        }
    }
}

impl TrainConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        let bad = |m: &str| Err(ClassifierError::InvalidConfig(m.into()));
        if self.epochs == 0 {
            return bad("epochs must be positive");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return bad("l2 must be non-negative");
        }
        if self.min_df == 0 {
            return bad("min_df must be positive");
        }
        Ok(())
    }
}

/// Per-class example weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    #[serde(rename = "false")]
    pub false_weight: f64,
    #[serde(rename = "true")]
    pub true_weight: f64,
}

impl ClassWeights {
    pub const UNIFORM: ClassWeights = ClassWeights {
        false_weight: 1.0,
        true_weight: 1.0,
    };

    /// `n / (2 * n_class)` for each class.
    pub fn balanced(n_true: usize, n_false: usize) -> Self {
        let n = (n_true + n_false) as f64;
        Self {
            false_weight: n / (2.0 * n_false as f64),
            true_weight: n / (2.0 * n_true as f64),
        }
    }

    pub fn of(&self, verdict: Verdict) -> f64 {
        match verdict {
            Verdict::True => self.true_weight,
            Verdict::False => self.false_weight,
        }
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Weighted, L2-regularized logistic loss over binary bag-of-words rows:
///
/// `L(w, b) = (1 / Σc) Σ c_i · logloss(σ(b + w·x_i), y_i) + (l2 / 2) ‖w‖²`
///
/// The bias is not regularized.
#[derive(Debug, Clone)]
pub struct LogisticObjective {
    rows: Vec<Vec<usize>>,
    labels: Vec<f64>,
    weights: Vec<f64>,
    total_weight: f64,
    dim: usize,
    l2: f64,
}

impl LogisticObjective {
    pub fn new(
        claims: &[VettedClaim],
        vocab: &TokenVocabulary,
        class_weights: ClassWeights,
        l2: f64,
    ) -> Self {
        let rows: Vec<Vec<usize>> = claims.iter().map(|c| vocab.features(&c.text)).collect();
        let labels = claims
            .iter()
            .map(|c| f64::from(c.verdict.as_u8()))
            .collect();
        let weights: Vec<f64> = claims.iter().map(|c| class_weights.of(c.verdict)).collect();
        let total_weight = weights.iter().sum();
        Self {
            rows,
            labels,
            weights,
            total_weight,
            dim: vocab.len(),
            l2,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn margin(row: &[usize], w: &[f64], b: f64) -> f64 {
        b + row.iter().map(|&j| w[j]).sum::<f64>()
    }

    pub fn loss(&self, w: &[f64], b: f64) -> f64 {
        let data: f64 = self
            .rows
            .iter()
            .zip(&self.labels)
            .zip(&self.weights)
            .map(|((row, &y), &c)| {
                let z = Self::margin(row, w, b);
                // log(1 + e^z) - y z, computed stably
                let softplus = if z > 0.0 {
                    z + (-z).exp().ln_1p()
                } else {
                    z.exp().ln_1p()
                };
                c * (softplus - y * z)
            })
            .sum();
        data / self.total_weight + 0.5 * self.l2 * w.iter().map(|v| v * v).sum::<f64>()
    }

    /// Analytic gradient `(∂L/∂w, ∂L/∂b)`.
    pub fn gradient(&self, w: &[f64], b: f64) -> (Vec<f64>, f64) {
        let mut gw: Vec<f64> = w.iter().map(|v| self.l2 * v).collect();
        let mut gb = 0.0;
        for ((row, &y), &c) in self.rows.iter().zip(&self.labels).zip(&self.weights) {
            let residual = c * (sigmoid(Self::margin(row, w, b)) - y) / self.total_weight;
            gb += residual;
            for &j in row {
                gw[j] += residual;
            }
        }
        (gw, gb)
    }
}

fn class_counts(claims: &[VettedClaim]) -> (usize, usize) {
    let n_true = claims.iter().filter(|c| c.verdict == Verdict::True).count();
    (n_true, claims.len() - n_true)
}

/// Fits logistic regression by full-batch gradient descent.
///
/// Weights start from a small uniform draw seeded by `config.seed`, so the
/// result is fully determined by the claim order and the config.
pub fn train(claims: &[VettedClaim], config: &TrainConfig) -> Result<ModelArtifact, ClassifierError> {
    config.validate()?;
    if claims.is_empty() {
        return Err(ClassifierError::EmptyCorpus);
    }
    let (n_true, n_false) = class_counts(claims);
    if n_true == 0 || n_false == 0 {
        return Err(ClassifierError::SingleClassCorpus);
    }
    let vocab = build_vocab(claims, config.min_df)?;
    let class_weights = if config.class_weighting {
        ClassWeights::balanced(n_true, n_false)
    } else {
        ClassWeights::UNIFORM
    };
    let objective = LogisticObjective::new(claims, &vocab, class_weights, config.l2);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut w: Vec<f64> = (0..vocab.len())
        .map(|_| rng.random_range(-0.01..0.01))
        .collect();
    let mut b = 0.0;
    for _ in 0..config.epochs {
        let (gw, gb) = objective.gradient(&w, b);
        for (wj, gj) in w.iter_mut().zip(&gw) {
            *wj -= config.learning_rate * gj;
        }
        b -= config.learning_rate * gb;
    }

    Ok(ModelArtifact {
        format_version: FORMAT_VERSION,
        vocabulary: vocab,
        weights: w,
        bias: b,
        hyperparameters: Hyperparameters {
            epochs: config.epochs,
            learning_rate: config.learning_rate,
            l2: config.l2,
            seed: config.seed,
            min_df: config.min_df,
            class_weighting: config.class_weighting,
            class_weights,
        },
        metadata: TrainingMetadata {
            corpus_digest: claims_digest(claims),
            examples: claims.len(),
            true_examples: n_true,
            false_examples: n_false,
            trained_at: None,
        },
    })
}

fn claims_digest(claims: &[VettedClaim]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    for c in claims {
        hasher.update(c.text.as_bytes());
        hasher.update([0, c.verdict.as_u8(), b'\n']);
    }
    hex::encode(hasher.finalize())
}
