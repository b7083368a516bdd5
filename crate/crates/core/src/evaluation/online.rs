//! On-line protocol: starting from an initial training set, each example is
//! predicted, then its label is revealed and it joins the training set.
//!
//! For Venn predictors the per-step error-probability interval
//! `[1 - U(y_hat), 1 - L(y_hat)]` is accumulated into the `LEP`/`UEP` curves;
//! for the plain network the single value `1 - max_j o_j` is accumulated
//! into `EP`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::argmax;
use super::pvalue::{two_sided_pvalue, PValue};
use super::{EvalError, Method};
use crate::dataset::{online_stream, Dataset, OnlineStep};
use crate::mlp::{fit_classifier, MlpConfig};
use crate::seed;
use crate::taxonomy::TaxonomyRule;
use crate::venn::{aggregate, ExtendedOutputs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineOptions {
    pub initial_size: usize,
    /// Seed of the single shuffle that fixes the presentation order.
    pub stream_seed: u64,
    /// Stop after this many predictions (a prefix of the stream).
    pub max_steps: Option<usize>,
}

impl Default for OnlineOptions {
    fn default() -> Self {
        Self {
            initial_size: 50,
            stream_seed: 0,
            max_steps: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based position of the predicted example in the stream.
    pub position: usize,
    pub true_label: usize,
    pub predicted_label: usize,
    /// `1 - U(y_hat)` for Venn predictors, `1 - p_hat` for the network.
    pub lower_error: f64,
    /// `1 - L(y_hat)` for Venn predictors, `1 - p_hat` for the network.
    pub upper_error: f64,
}

impl StepRecord {
    pub fn is_error(&self) -> bool {
        self.predicted_label != self.true_label
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineRun {
    pub method: Method,
    pub records: Vec<StepRecord>,
    /// The stream was cut short by `max_steps`.
    pub subsampled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Number of predictions made so far.
    pub n: usize,
    pub errors: usize,
    /// `LEP_n`, or `EP_n` for the network.
    pub lower: f64,
    /// `UEP_n`, or `EP_n` for the network.
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineCurves {
    pub method: Method,
    pub points: Vec<CurvePoint>,
}

impl OnlineCurves {
    pub fn last(&self) -> Option<&CurvePoint> {
        self.points.last()
    }

    /// `n,E_n,LEP_n,UEP_n` for Venn runs, `n,E_n,EP_n` for the network.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.method {
            Method::NeuralNet => {
                out.push_str("n,E_n,EP_n\n");
                for p in &self.points {
                    let _ = writeln!(out, "{},{},{}", p.n, p.errors, p.lower);
                }
            }
            Method::Venn(_) => {
                out.push_str("n,E_n,LEP_n,UEP_n\n");
                for p in &self.points {
                    let _ = writeln!(out, "{},{},{},{}", p.n, p.errors, p.lower, p.upper);
                }
            }
        }
        out
    }
}

/// Final values of an on-line run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineSummary {
    pub method: String,
    pub steps: usize,
    pub subsampled: bool,
    pub errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lep: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uep: Option<f64>,
    /// `LEP_N <= E_N <= UEP_N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contained: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ep: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<PValue>,
}

impl OnlineRun {
    pub fn curves(&self) -> OnlineCurves {
        let mut errors = 0;
        let (mut lower, mut upper) = (0.0, 0.0);
        let points = self
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                errors += usize::from(r.is_error());
                lower += r.lower_error;
                upper += r.upper_error;
                CurvePoint {
                    n: i + 1,
                    errors,
                    lower,
                    upper,
                }
            })
            .collect();
        OnlineCurves {
            method: self.method,
            points,
        }
    }

    pub fn summary(&self) -> Result<OnlineSummary, EvalError> {
        let curves = self.curves();
        let last = curves.last().copied().unwrap_or(CurvePoint {
            n: 0,
            errors: 0,
            lower: 0.0,
            upper: 0.0,
        });
        let mut summary = OnlineSummary {
            method: self.method.to_string(),
            steps: last.n,
            subsampled: self.subsampled,
            errors: last.errors,
            lep: None,
            uep: None,
            contained: None,
            ep: None,
            p_value: None,
        };
        match self.method {
            Method::Venn(_) => {
                let e = last.errors as f64;
                summary.lep = Some(last.lower);
                summary.uep = Some(last.upper);
                summary.contained = Some(last.lower <= e && e <= last.upper);
            }
            Method::NeuralNet => {
                let q: Vec<f64> = self.records.iter().map(|r| r.lower_error).collect();
                summary.ep = Some(last.lower);
                summary.p_value = Some(two_sided_pvalue(last.errors, &q)?);
            }
        }
        Ok(summary)
    }
}

fn steps(dataset: &Dataset, options: &OnlineOptions) -> Result<(Vec<OnlineStep>, bool), EvalError> {
    let stream = online_stream(dataset, options.initial_size, options.stream_seed)?;
    let total = stream.len();
    let limit = options.max_steps.unwrap_or(total).min(total);
    Ok((stream.take(limit).collect(), limit < total))
}

fn step_config(nn_config: &MlpConfig, position: usize) -> MlpConfig {
    nn_config.with_seed(seed::derive(nn_config.init_seed, &[position as u64]))
}

/// On-line Venn prediction for several taxonomies at once. The retrained
/// networks do not depend on the taxonomy, so each step trains them once and
/// categorizes their outputs under every rule.
pub fn run_online_vp_multi(
    dataset: &Dataset,
    rules: &[TaxonomyRule],
    nn_config: &MlpConfig,
    options: &OnlineOptions,
) -> Result<Vec<OnlineRun>, EvalError> {
    let (steps, subsampled) = steps(dataset, options)?;
    let mut runs: Vec<OnlineRun> = rules
        .iter()
        .map(|&rule| OnlineRun {
            method: Method::Venn(rule),
            records: Vec::with_capacity(steps.len()),
            subsampled,
        })
        .collect();
    for step in &steps {
        let config = step_config(nn_config, step.position);
        let outputs = ExtendedOutputs::compute(&step.train, &step.next.attributes, &config)?;
        for (run, rule) in runs.iter_mut().zip(rules) {
            let prediction = aggregate(&outputs.multiprobability(rule)?);
            let error = prediction.error_interval;
            run.records.push(StepRecord {
                position: step.position,
                true_label: step.next.label,
                predicted_label: prediction.predicted_label,
                lower_error: error.lower,
                upper_error: error.upper,
            });
        }
    }
    Ok(runs)
}

pub fn run_online_vp(
    dataset: &Dataset,
    rule: &TaxonomyRule,
    nn_config: &MlpConfig,
    options: &OnlineOptions,
) -> Result<OnlineRun, EvalError> {
    let mut runs = run_online_vp_multi(dataset, std::slice::from_ref(rule), nn_config, options)?;
    Ok(runs.remove(0))
}

/// On-line protocol for the plain network.
pub fn run_online_nn(
    dataset: &Dataset,
    nn_config: &MlpConfig,
    options: &OnlineOptions,
) -> Result<OnlineRun, EvalError> {
    let (steps, subsampled) = steps(dataset, options)?;
    let records = steps
        .iter()
        .map(|step| {
            let classifier = fit_classifier(&step_config(nn_config, step.position), &step.train)?;
            let probs = classifier.predict_proba(&step.next.attributes)?;
            let predicted_label = argmax(&probs);
            let q = 1.0 - probs[predicted_label];
            Ok(StepRecord {
                position: step.position,
                true_label: step.next.label,
                predicted_label,
                lower_error: q,
                upper_error: q,
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(OnlineRun {
        method: Method::NeuralNet,
        records,
        subsampled,
    })
}
