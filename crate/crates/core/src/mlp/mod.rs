//! Single-hidden-layer network: `tanh` hidden units, softmax outputs,
//! trained on summed cross-entropy.
//!
//! Parameters are kept in one flat vector so the optimizer can treat the
//! network as a point in `R^n`. Layout, row-major throughout:
//!
//! ```text
//! [ input_to_hidden (h x d) | hidden_bias (h) | hidden_to_output (c x h) | output_bias (c) ]
//! ```

mod scg;

pub use scg::{
    fit_classifier, restart_seed, scg_train, train_with_restarts, validation_split, Classifier,
    RestartOutcome, ScgOutcome, StopReason,
};

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{DataError, Dataset, Example};
use crate::seed;

/// Probabilities are clamped to `[PROB_FLOOR, 1]` before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MlpError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("empty batch")]
    EmptyBatch,
    #[error("label {label} out of range for {num_classes} outputs")]
    LabelOutOfRange { label: usize, num_classes: usize },
    #[error("non-finite training loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("all {restarts} training restarts failed; last error: {last}")]
    AllRestartsFailed { restarts: usize, last: Box<MlpError> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("malformed model dump: {0}")]
    Dump(String),
}

pub type Result<T, E = MlpError> = std::result::Result<T, E>;

/// Training protocol for one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub hidden_units: usize,
    /// Independent trainings from different initial weights; the one with
    /// the lowest validation loss wins.
    pub num_restarts: usize,
    /// Share of the training data held out for early stopping.
    pub validation_fraction: f64,
    pub max_epochs: usize,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    pub init_seed: u64,
}

impl MlpConfig {
    pub fn new(hidden_units: usize) -> Self {
        Self {
            hidden_units,
            num_restarts: 3,
            validation_fraction: 0.30,
            max_epochs: 200,
            patience: 20,
            init_seed: 0,
        }
    }

    pub fn with_seed(&self, init_seed: u64) -> Self {
        Self {
            init_seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden_units == 0 {
            return Err(MlpError::InvalidConfig("hidden_units must be at least 1".into()));
        }
        if self.num_restarts == 0 {
            return Err(MlpError::InvalidConfig("num_restarts must be at least 1".into()));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(MlpError::InvalidConfig(format!(
                "validation_fraction {} not in (0, 1)",
                self.validation_fraction
            )));
        }
        Ok(())
    }
}

/// Binary encoding of a class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneHot {
    pub class: usize,
    pub num_classes: usize,
}

impl OneHot {
    pub fn new(class: usize, num_classes: usize) -> Result<Self> {
        if class >= num_classes {
            return Err(MlpError::LabelOutOfRange {
                label: class,
                num_classes,
            });
        }
        Ok(Self { class, num_classes })
    }

    pub fn get(&self, j: usize) -> f64 {
        if j == self.class {
            1.0
        } else {
            0.0
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.num_classes).map(|j| self.get(j)).collect()
    }
}

/// Layer sizes of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
}

impl Shape {
    pub fn num_params(&self) -> usize {
        self.hidden * (self.inputs + 1) + self.outputs * (self.hidden + 1)
    }

    fn offsets(&self) -> (usize, usize, usize) {
        let b1 = self.hidden * self.inputs;
        let w2 = b1 + self.hidden;
        let b2 = w2 + self.outputs * self.hidden;
        (b1, w2, b2)
    }

    /// Runs the network on `x`, leaving hidden activations in `hidden` and
    /// output logits in `logits`.
    fn propagate(&self, params: &[f64], x: &[f64], hidden: &mut [f64], logits: &mut [f64]) {
        let (b1, w2, b2) = self.offsets();
        let d = self.inputs;
        for (i, h) in hidden.iter_mut().enumerate() {
            let row = &params[i * d..(i + 1) * d];
            let a = row.iter().zip(x).fold(params[b1 + i], |acc, (w, x)| acc + w * x);
            *h = a.tanh();
        }
        let nh = self.hidden;
        for (j, z) in logits.iter_mut().enumerate() {
            let row = &params[w2 + j * nh..w2 + (j + 1) * nh];
            *z = row.iter().zip(hidden.iter()).fold(params[b2 + j], |acc, (w, h)| acc + w * h);
        }
    }

    /// Loss over a dataset, optionally accumulating the gradient into `grad`.
    pub(crate) fn evaluate(&self, params: &[f64], data: &[Example], mut grad: Option<&mut [f64]>) -> f64 {
        let (b1, w2, b2) = self.offsets();
        let (d, nh, c) = (self.inputs, self.hidden, self.outputs);
        let mut hidden = vec![0.0; nh];
        let mut out = vec![0.0; c];
        let mut delta_h = vec![0.0; nh];
        let floor = PROB_FLOOR.ln();
        if let Some(g) = grad.as_deref_mut() {
            g.fill(0.0);
        }
        let mut loss = 0.0;
        for ex in data {
            self.propagate(params, &ex.attributes, &mut hidden, &mut out);
            let lse = log_sum_exp(&out);
            let log_p = out[ex.label] - lse;
            let clamped = log_p < floor;
            loss -= log_p.max(floor);
            let Some(g) = grad.as_deref_mut() else { continue };
            if clamped {
                // the clamped term is flat in every parameter
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o - lse).exp() - if j == ex.label { 1.0 } else { 0.0 };
            }
            delta_h.fill(0.0);
            for (j, &dj) in out.iter().enumerate() {
                g[b2 + j] += dj;
                let row = w2 + j * nh;
                for i in 0..nh {
                    g[row + i] += dj * hidden[i];
                    delta_h[i] += dj * params[row + i];
                }
            }
            for i in 0..nh {
                let di = delta_h[i] * (1.0 - hidden[i] * hidden[i]);
                g[b1 + i] += di;
                let row = i * d;
                for (k, xk) in ex.attributes.iter().enumerate() {
                    g[row + k] += di * xk;
                }
            }
        }
        loss
    }
}

fn log_sum_exp(z: &[f64]) -> f64 {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

fn softmax_in_place(z: &mut [f64]) {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = 0.0;
    for v in z.iter_mut() {
        *v = (*v - m).exp();
        s += *v;
    }
    for v in z.iter_mut() {
        *v /= s;
    }
}

/// Weights and biases of a trained or freshly initialized network.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    shape: Shape,
    params: Vec<f64>,
}

impl Mlp {
    pub fn zeros(shape: Shape) -> Self {
        Self {
            shape,
            params: vec![0.0; shape.num_params()],
        }
    }

    /// Uniform weights and biases in `±1/sqrt(fan_in)` per layer.
    pub fn random(shape: Shape, seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let (_, w2, _) = shape.offsets();
        let r1 = 1.0 / (shape.inputs as f64).sqrt();
        let r2 = 1.0 / (shape.hidden as f64).sqrt();
        let params = (0..shape.num_params())
            .map(|i| {
                let r = if i < w2 { r1 } else { r2 };
                rng.gen_range(-r..=r)
            })
            .collect();
        Self { shape, params }
    }

    pub fn from_params(shape: Shape, params: Vec<f64>) -> Result<Self> {
        if params.len() != shape.num_params() {
            return Err(MlpError::DimensionMismatch {
                expected: shape.num_params(),
                actual: params.len(),
            });
        }
        Ok(Self { shape, params })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn input_to_hidden(&self) -> &[f64] {
        &self.params[..self.shape.offsets().0]
    }

    pub fn hidden_bias(&self) -> &[f64] {
        let (b1, w2, _) = self.shape.offsets();
        &self.params[b1..w2]
    }

    pub fn hidden_to_output(&self) -> &[f64] {
        let (_, w2, b2) = self.shape.offsets();
        &self.params[w2..b2]
    }

    pub fn output_bias(&self) -> &[f64] {
        &self.params[self.shape.offsets().2..]
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.shape.inputs {
            return Err(MlpError::DimensionMismatch {
                expected: self.shape.inputs,
                actual: x.len(),
            });
        }
        let mut hidden = vec![0.0; self.shape.hidden];
        let mut out = vec![0.0; self.shape.outputs];
        self.shape.propagate(&self.params, x, &mut hidden, &mut out);
        softmax_in_place(&mut out);
        Ok(out)
    }

    /// Summed cross-entropy of the network over `data`.
    pub fn loss(&self, data: &Dataset) -> Result<f64> {
        self.check_data(data)?;
        Ok(self.shape.evaluate(&self.params, data.examples(), None))
    }

    fn check_data(&self, data: &Dataset) -> Result<()> {
        if data.num_attributes() != self.shape.inputs {
            return Err(MlpError::DimensionMismatch {
                expected: self.shape.inputs,
                actual: data.num_attributes(),
            });
        }
        if data.num_classes() != self.shape.outputs {
            return Err(MlpError::DimensionMismatch {
                expected: self.shape.outputs,
                actual: data.num_classes(),
            });
        }
        Ok(())
    }

    pub fn to_dump(&self) -> ModelDump {
        ModelDump {
            format_version: ModelDump::VERSION,
            shape: self.shape,
            input_to_hidden: self.input_to_hidden().to_vec(),
            hidden_bias: self.hidden_bias().to_vec(),
            hidden_to_output: self.hidden_to_output().to_vec(),
            output_bias: self.output_bias().to_vec(),
        }
    }

    pub fn from_dump(dump: &ModelDump) -> Result<Self> {
        if dump.format_version != ModelDump::VERSION {
            return Err(MlpError::Dump(format!(
                "unsupported format version {}",
                dump.format_version
            )));
        }
        let params: Vec<f64> = [
            &dump.input_to_hidden,
            &dump.hidden_bias,
            &dump.hidden_to_output,
            &dump.output_bias,
        ]
        .into_iter()
        .flatten()
        .copied()
        .collect();
        let model = Self::from_params(dump.shape, params)?;
        if model.to_dump() != *dump {
            return Err(MlpError::Dump("layer sizes do not match the shape".into()));
        }
        Ok(model)
    }
}

/// JSON debugging dump of a network. Not a stable interchange format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDump {
    pub format_version: u32,
    pub shape: Shape,
    pub input_to_hidden: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub hidden_to_output: Vec<f64>,
    pub output_bias: Vec<f64>,
}

impl ModelDump {
    pub const VERSION: u32 = 1;
}

pub fn forward(model: &Mlp, x: &[f64]) -> Result<Vec<f64>> {
    model.forward(x)
}

/// `-sum_i sum_j t_ij ln(o_ij)`, summed over examples, with each
/// probability clamped to `[PROB_FLOOR, 1]`.
pub fn cross_entropy(outputs: &[Vec<f64>], targets: &[OneHot]) -> Result<f64> {
    if outputs.len() != targets.len() {
        return Err(MlpError::DimensionMismatch {
            expected: outputs.len(),
            actual: targets.len(),
        });
    }
    outputs.iter().zip(targets).try_fold(0.0, |acc, (o, t)| {
        if o.len() != t.num_classes {
            return Err(MlpError::DimensionMismatch {
                expected: t.num_classes,
                actual: o.len(),
            });
        }
        Ok(acc - o[t.class].clamp(PROB_FLOOR, 1.0).ln())
    })
}

/// Gradient of the summed (clamped) cross-entropy over `batch` with respect
/// to every parameter, in the flat layout of [`Mlp::params`].
pub fn gradient(model: &Mlp, batch: &Dataset) -> Result<Vec<f64>> {
    Ok(loss_and_gradient(model, batch)?.1)
}

pub fn loss_and_gradient(model: &Mlp, batch: &Dataset) -> Result<(f64, Vec<f64>)> {
    if batch.is_empty() {
        return Err(MlpError::EmptyBatch);
    }
    model.check_data(batch)?;
    let mut grad = vec![0.0; model.params.len()];
    let loss = model
        .shape
        .evaluate(&model.params, batch.examples(), Some(&mut grad));
    Ok((loss, grad))
}
