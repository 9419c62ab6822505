use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Classifier, ClassifierError, LogisticTrainer, TrainConfig, Trainer};
use crate::corpus::{Verdict, VettedClaim};

/// Confusion counts with `True` as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn record(&mut self, actual: Verdict, predicted: Verdict) {
        match (actual, predicted) {
            (Verdict::True, Verdict::True) => self.tp += 1,
            (Verdict::False, Verdict::False) => self.tn += 1,
            (Verdict::False, Verdict::True) => self.fp += 1,
            (Verdict::True, Verdict::False) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            (self.tp + self.tn) as f64 / self.total() as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub accuracy: f64,
    pub confusion: Confusion,
    /// Indices into the evaluated claim list.
    pub test_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
}

impl CvReport {
    pub fn accuracies(&self) -> Vec<f64> {
        self.folds.iter().map(|f| f.accuracy).collect()
    }
}

/// Assigns every example to one of `k` test folds, stratified by verdict.
///
/// Each class is shuffled with a generator seeded by `seed` and dealt
/// round-robin; the deal continues across classes so overall fold sizes
/// also differ by at most one.
pub fn stratified_folds(
    verdicts: &[Verdict],
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>, ClassifierError> {
    if k < 2 {
        return Err(ClassifierError::InvalidConfig(format!("k must be at least 2, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for class in [Verdict::True, Verdict::False] {
        let mut members: Vec<usize> = verdicts
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == class)
            .map(|(i, _)| i)
            .collect();
        if members.len() < k {
            return Err(ClassifierError::TooFewExamples(format!(
                "{} {class} examples for {k} folds",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Stratified k-fold cross-validation of any trainer.
pub fn cross_validate_with<T: Trainer>(
    claims: &[VettedClaim],
    k: usize,
    seed: u64,
    trainer: &T,
) -> Result<CvReport, ClassifierError> {
    let verdicts: Vec<Verdict> = claims.iter().map(|c| c.verdict).collect();
    let folds = stratified_folds(&verdicts, k, seed)?;
    let mut in_test = vec![false; claims.len()];
    let mut results = Vec::with_capacity(k);
    for (fold, test) in folds.into_iter().enumerate() {
        in_test.iter_mut().for_each(|t| *t = false);
        for &i in &test {
            in_test[i] = true;
        }
        let training: Vec<VettedClaim> = claims
            .iter()
            .zip(&in_test)
            .filter(|(_, t)| !**t)
            .map(|(c, _)| c.clone())
            .collect();
        let model = trainer.fit(&training)?;
        let mut confusion = Confusion::default();
        for &i in &test {
            confusion.record(claims[i].verdict, model.predict(&claims[i].text).verdict);
        }
        results.push(FoldResult {
            fold,
            accuracy: confusion.accuracy(),
            confusion,
            test_indices: test,
        });
    }
    let mean_accuracy = results.iter().map(|f| f.accuracy).sum::<f64>() / k as f64;
    Ok(CvReport {
        k,
        seed,
        folds: results,
        mean_accuracy,
    })
}

/// Cross-validates the logistic model; folds are shuffled with `config.seed`.
pub fn cross_validate(
    claims: &[VettedClaim],
    k: usize,
    config: &TrainConfig,
) -> Result<CvReport, ClassifierError> {
    cross_validate_with(claims, k, config.seed, &LogisticTrainer(*config))
}
