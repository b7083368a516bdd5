//! Batch protocol: repeated random train/test divisions, with every metric
//! computed over the union of all test sets.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::BatchMetrics;
use super::{EvalError, Method};
use crate::dataset::{split, Dataset, SplitPlan};
use crate::mlp::{fit_classifier, MlpConfig};
use crate::seed;
use crate::taxonomy::TaxonomyRule;
use crate::venn::{aggregate, ExtendedOutputs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchOptions {
    /// Number of equal-width probability bins for the reliability term.
    pub reliability_bins: usize,
    /// Restarts used inside the Venn loop; `None` keeps the network
    /// configuration's value.
    pub venn_restarts: Option<usize>,
}

impl Default for BatchOptions {
    fn default() -> Self {
        Self {
            reliability_bins: 100,
            venn_restarts: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodMetrics {
    pub method: Method,
    pub metrics: BatchMetrics,
}

/// Pooled predictions of one method, kept for re-scoring.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PooledPredictions {
    pub probs: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub repeats: usize,
    pub test_examples: usize,
    pub reliability_bins: usize,
    pub nn_restarts: usize,
    pub venn_restarts: usize,
    pub rows: Vec<MethodMetrics>,
}

impl BatchReport {
    pub fn get(&self, method: Method) -> Option<&BatchMetrics> {
        self.rows.iter().find(|r| r.method == method).map(|r| &r.metrics)
    }

    /// Notes about deviations from the standard protocol, if any.
    pub fn deviations(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.venn_restarts != self.nn_restarts {
            notes.push(format!(
                "Venn predictor networks trained with {} restart(s) instead of {}",
                self.venn_restarts, self.nn_restarts
            ));
        }
        notes
    }

    /// Aligned text table with one row per method.
    pub fn to_text_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<16} {:>9} {:>10} {:>8} {:>8}",
            "Method", "Accuracy", "CE", "BS", "REL"
        );
        for row in &self.rows {
            let m = &row.metrics;
            let _ = writeln!(
                out,
                "{:<16} {:>8.2}% {:>10.2} {:>8.4} {:>8.4}",
                row.method.to_string(),
                100.0 * m.accuracy,
                m.cross_entropy,
                m.brier,
                m.reliability
            );
        }
        for note in self.deviations() {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

/// Runs the plain network and one Venn predictor per rule over every
/// repeat of `plan`.
///
/// The network of repeat `r` trains with seed `derive(seed, [2, r])`; the
/// Venn predictor for test example `i` of repeat `r` uses base seed
/// `derive(seed, [3, r, i])`, where `seed` is `nn_config.init_seed`.
pub fn run_batch(
    dataset: &Dataset,
    rules: &[TaxonomyRule],
    nn_config: &MlpConfig,
    plan: &SplitPlan,
    options: &BatchOptions,
) -> Result<BatchReport, EvalError> {
    let pooled = collect_batch_predictions(dataset, rules, nn_config, plan, options)?;
    let mut rows = Vec::with_capacity(pooled.len());
    for (method, preds) in pooled {
        rows.push(MethodMetrics {
            method,
            metrics: BatchMetrics::compute(&preds.probs, &preds.labels, options.reliability_bins),
        });
    }
    Ok(BatchReport {
        repeats: plan.num_repeats,
        test_examples: rows.first().map_or(0, |r| r.metrics.num_examples),
        reliability_bins: options.reliability_bins,
        nn_restarts: nn_config.num_restarts,
        venn_restarts: options.venn_restarts.unwrap_or(nn_config.num_restarts),
        rows,
    })
}

/// The probabilistic outputs behind [`run_batch`], pooled per method: the
/// network's softmax outputs and each Venn predictor's mean probabilities.
pub fn collect_batch_predictions(
    dataset: &Dataset,
    rules: &[TaxonomyRule],
    nn_config: &MlpConfig,
    plan: &SplitPlan,
    options: &BatchOptions,
) -> Result<Vec<(Method, PooledPredictions)>, EvalError> {
    plan.validate()?;
    if options.reliability_bins == 0 {
        return Err(EvalError::InvalidInput("reliability_bins must be at least 1".into()));
    }
    let root = nn_config.init_seed;
    let mut venn_config = nn_config.clone();
    if let Some(r) = options.venn_restarts {
        venn_config.num_restarts = r;
    }
    let mut methods: Vec<(Method, PooledPredictions)> = std::iter::once(Method::NeuralNet)
        .chain(rules.iter().map(|&r| Method::Venn(r)))
        .map(|m| (m, PooledPredictions::default()))
        .collect();

    for repeat in 0..plan.num_repeats {
        let (train, test) = split(dataset, plan, repeat)?;
        let classifier = fit_classifier(
            &nn_config.with_seed(seed::derive(root, &[2, repeat as u64])),
            &train,
        )?;
        for (i, example) in test.examples().iter().enumerate() {
            let nn = &mut methods[0].1;
            nn.probs.push(classifier.predict_proba(&example.attributes)?);
            nn.labels.push(example.label);
            if rules.is_empty() {
                continue;
            }
            let config = venn_config.with_seed(seed::derive(root, &[3, repeat as u64, i as u64]));
            let outputs = ExtendedOutputs::compute(&train, &example.attributes, &config)?;
            for (rule, (_, pooled)) in rules.iter().zip(methods.iter_mut().skip(1)) {
                let prediction = aggregate(&outputs.multiprobability(rule)?);
                pooled.probs.push(prediction.mean_probs);
                pooled.labels.push(example.label);
            }
        }
    }
    Ok(methods)
}
