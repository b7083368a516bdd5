//! Transductive Venn predictor with a neural network as the underlying
//! algorithm.
//!
//! For a new object `x` and each candidate label `k`, the network is
//! retrained on the training set extended with `(x, k)`. Every member of the
//! extended set is then categorized from the retrained network's outputs,
//! and the label frequencies inside the new example's category (which
//! always contains `(x, k)` itself) give the distribution `p^k`. The `c`
//! distributions form the multiprobability prediction; their per-class
//! minimum and maximum give the probability interval of each class.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{DataError, Dataset, Example, NormalizationStats};
use crate::mlp::{self, MlpConfig, MlpError};
use crate::seed;
use crate::taxonomy::{category_of, CategoryKey, TaxonomyError, TaxonomyRule};

/// Row sums of a multiprobability must be within this of 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum VennError {
    #[error("training for candidate label {candidate} failed: {source}")]
    Training {
        candidate: usize,
        #[source]
        source: MlpError,
    },
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("invalid multiprobability: {0}")]
    InvalidMultiProbability(String),
    #[error("inconsistent network outputs: {0}")]
    InconsistentOutputs(String),
    #[error("training set is empty")]
    EmptyTrainingSet,
}

pub type Result<T, E = VennError> = std::result::Result<T, E>;

/// `c` distributions over `c` labels; row `k` was obtained assuming the new
/// example has label `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiProbability {
    rows: Vec<Vec<f64>>,
}

impl MultiProbability {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let c = rows.len();
        if c < 2 {
            return Err(VennError::InvalidMultiProbability(format!("{c} rows")));
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(VennError::InvalidMultiProbability(format!(
                    "row {k} has {} entries, expected {c}",
                    row.len()
                )));
            }
            if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(VennError::InvalidMultiProbability(format!(
                    "row {k} has entries outside [0, 1]"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(VennError::InvalidMultiProbability(format!(
                    "row {k} sums to {sum}"
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn num_classes(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `p^k(j)`.
    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.rows[k][j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ProbabilityInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }

    /// `[1 - upper, 1 - lower]`.
    pub fn complement(&self) -> Self {
        Self {
            lower: 1.0 - self.upper,
            upper: 1.0 - self.lower,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionResult {
    pub predicted_label: usize,
    /// Mean of the `c` distributions, per class.
    pub mean_probs: Vec<f64>,
    /// `[min_k p^k(j), max_k p^k(j)]` per class `j`.
    pub intervals: Vec<ProbabilityInterval>,
    /// Probability that the prediction is wrong.
    pub error_interval: ProbabilityInterval,
}

impl PredictionResult {
    pub fn prediction_interval(&self) -> ProbabilityInterval {
        self.intervals[self.predicted_label]
    }

    pub fn report(&self, class_names: &[String]) -> PredictionReport {
        PredictionReport {
            predicted_class: class_names[self.predicted_label].clone(),
            mean_probabilities: self.mean_probs.clone(),
            intervals: self.intervals.iter().map(|i| [i.lower, i.upper]).collect(),
            error_interval: [self.error_interval.lower, self.error_interval.upper],
        }
    }
}

/// JSON form of a prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub predicted_class: String,
    pub mean_probabilities: Vec<f64>,
    pub intervals: Vec<[f64; 2]>,
    pub error_interval: [f64; 2],
}

/// Label distribution inside the category of member `target`:
/// `|{i : key_i = key_target, label_i = j}| / |{i : key_i = key_target}|`.
pub fn category_distribution(
    keys: &[CategoryKey],
    labels: &[usize],
    target: usize,
    num_classes: usize,
) -> Vec<f64> {
    debug_assert_eq!(keys.len(), labels.len());
    let mut counts = vec![0usize; num_classes];
    let mut size = 0usize;
    for (key, &label) in keys.iter().zip(labels) {
        if *key == keys[target] {
            counts[label] += 1;
            size += 1;
        }
    }
    // the target is always a member of its own category
    debug_assert!(size >= 1);
    counts.into_iter().map(|n| n as f64 / size as f64).collect()
}

/// Network outputs on every member of every extended set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedOutputs {
    base_labels: Vec<usize>,
    /// `outputs[k][i]`: outputs for member `i` of the extended set with
    /// candidate label `k`; the new example is the last member.
    outputs: Vec<Vec<Vec<f64>>>,
}

impl ExtendedOutputs {
    /// Retrains one network per candidate label.
    ///
    /// Attributes are normalized with statistics fitted on each extended
    /// set. Candidate `k` trains with seed `derive(config.init_seed, [k])`.
    pub fn compute(train: &Dataset, x_new: &[f64], config: &MlpConfig) -> Result<Self> {
        if train.is_empty() {
            return Err(VennError::EmptyTrainingSet);
        }
        if x_new.len() != train.num_attributes() {
            return Err(DataError::DimensionMismatch {
                expected: train.num_attributes(),
                actual: x_new.len(),
            }
            .into());
        }
        let c = train.num_classes();
        let outputs = (0..c)
            .into_par_iter()
            .map(|k| candidate_outputs(train, x_new, k, config))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            base_labels: train.labels().collect(),
            outputs,
        })
    }

    pub fn from_parts(base_labels: Vec<usize>, outputs: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let c = outputs.len();
        let members = base_labels.len() + 1;
        if c < 2 {
            return Err(VennError::InconsistentOutputs(format!("{c} candidates")));
        }
        if let Some(&bad) = base_labels.iter().find(|&&l| l >= c) {
            return Err(VennError::InconsistentOutputs(format!("label {bad} >= {c}")));
        }
        for (k, per_member) in outputs.iter().enumerate() {
            if per_member.len() != members || per_member.iter().any(|o| o.len() != c) {
                return Err(VennError::InconsistentOutputs(format!(
                    "candidate {k} does not hold {members} output vectors of length {c}"
                )));
            }
        }
        Ok(Self {
            base_labels,
            outputs,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.outputs.len()
    }

    /// Number of retrained networks (one per candidate label).
    pub fn num_trainings(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self, candidate: usize) -> &[Vec<f64>] {
        &self.outputs[candidate]
    }

    /// Labels of the extended set for `candidate`, new example last.
    pub fn extended_labels(&self, candidate: usize) -> Vec<usize> {
        let mut labels = self.base_labels.clone();
        labels.push(candidate);
        labels
    }

    /// Category keys of every extended-set member under `rule`.
    pub fn categories(&self, rule: &TaxonomyRule, candidate: usize) -> Result<Vec<CategoryKey>> {
        self.outputs[candidate]
            .iter()
            .map(|o| category_of(rule, o).map_err(VennError::from))
            .collect()
    }

    pub fn multiprobability(&self, rule: &TaxonomyRule) -> Result<MultiProbability> {
        let c = self.num_classes();
        let target = self.base_labels.len();
        let rows = (0..c)
            .map(|k| {
                let keys = self.categories(rule, k)?;
                Ok(category_distribution(&keys, &self.extended_labels(k), target, c))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiProbability::from_rows(rows)
    }
}

fn candidate_outputs(
    train: &Dataset,
    x_new: &[f64],
    candidate: usize,
    config: &MlpConfig,
) -> Result<Vec<Vec<f64>>> {
    let wrap = |source: MlpError| VennError::Training { candidate, source };
    let mut extended = train.clone();
    extended.push(Example::new(x_new.to_vec(), candidate))?;
    let stats = NormalizationStats::fit(&extended)?;
    let normalized = stats.apply(&extended)?;
    let candidate_config = config.with_seed(seed::derive(config.init_seed, &[candidate as u64]));
    let trained = mlp::train_with_restarts(&candidate_config, &normalized).map_err(wrap)?;
    normalized
        .examples()
        .iter()
        .map(|e| trained.model.forward(&e.attributes).map_err(wrap))
        .collect()
}

pub fn multiprobability(
    train: &Dataset,
    x_new: &[f64],
    rule: &TaxonomyRule,
    nn_config: &MlpConfig,
) -> Result<MultiProbability> {
    ExtendedOutputs::compute(train, x_new, nn_config)?.multiprobability(rule)
}

/// Collapses a multiprobability into per-class intervals, mean
/// probabilities and a point prediction.
pub fn aggregate(p: &MultiProbability) -> PredictionResult {
    let c = p.num_classes();
    let mut mean_probs = Vec::with_capacity(c);
    let mut intervals = Vec::with_capacity(c);
    for j in 0..c {
        let column = p.rows().iter().map(|row| row[j]);
        let lower = column.clone().fold(f64::INFINITY, f64::min);
        let upper = column.clone().fold(f64::NEG_INFINITY, f64::max);
        // rounding in the sum must not push the mean outside [lower, upper]
        let mean = (column.sum::<f64>() / c as f64).clamp(lower, upper);
        mean_probs.push(mean);
        intervals.push(ProbabilityInterval { lower, upper });
    }
    let mut predicted_label = 0;
    for j in 1..c {
        if mean_probs[j] > mean_probs[predicted_label] {
            predicted_label = j;
        }
    }
    PredictionResult {
        predicted_label,
        error_interval: intervals[predicted_label].complement(),
        mean_probs,
        intervals,
    }
}

pub fn predict(
    train: &Dataset,
    x_new: &[f64],
    rule: &TaxonomyRule,
    nn_config: &MlpConfig,
) -> Result<PredictionResult> {
    Ok(aggregate(&multiprobability(train, x_new, rule, nn_config)?))
}
