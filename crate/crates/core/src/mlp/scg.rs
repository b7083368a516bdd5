//! Full-batch scaled conjugate gradient (Møller, 1993) with early stopping.
//!
//! The step size comes from a finite-difference estimate of the curvature
//! along the search direction, regularized by `lambda` in a
//! Levenberg-Marquardt fashion, so no line search is needed.

use rayon::prelude::*;

use super::{Mlp, MlpConfig, MlpError, Result, Shape};
use crate::dataset::{self, DataError, Dataset, NormalizationStats};
use crate::seed;

const SIGMA0: f64 = 1e-4;
const LAMBDA_INIT: f64 = 1e-6;
const LAMBDA_MIN: f64 = 1e-15;
const LAMBDA_MAX: f64 = 1e100;
const MIN_DIRECTION_NORM2: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxEpochs,
    Patience,
    /// Gradient, search direction or step collapsed to zero.
    Converged,
    /// The scale parameter ran away; no further progress is possible.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct ScgOutcome {
    /// Weights with the lowest validation loss seen.
    pub model: Mlp,
    pub best_validation_loss: f64,
    /// Epoch at which `model` was captured (0 = initial weights).
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub stop: StopReason,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Trains from the seeded initial weights of `config.init_seed` on `train`,
/// monitoring summed cross-entropy on `validation` after every epoch.
///
/// An epoch is one SCG iteration over the full batch. Patience counts only
/// iterations that moved the weights.
pub fn scg_train(config: &MlpConfig, train: &Dataset, validation: &Dataset) -> Result<ScgOutcome> {
    config.validate()?;
    if train.is_empty() || validation.is_empty() {
        return Err(MlpError::EmptyBatch);
    }
    if train.num_attributes() != validation.num_attributes() {
        return Err(MlpError::DimensionMismatch {
            expected: train.num_attributes(),
            actual: validation.num_attributes(),
        });
    }
    let shape = Shape {
        inputs: train.num_attributes(),
        hidden: config.hidden_units,
        outputs: train.num_classes(),
    };
    let init = Mlp::random(shape, config.init_seed);
    let train = train.examples();
    let validation = validation.examples();
    let n = shape.num_params();

    let mut w = init.params.clone();
    let mut grad = vec![0.0; n];
    let mut f = shape.evaluate(&w, train, Some(&mut grad));
    if !f.is_finite() {
        return Err(MlpError::NonFiniteLoss { epoch: 0 });
    }
    let mut best_w = w.clone();
    let mut best_val = shape.evaluate(&w, validation, None);
    let mut best_epoch = 0;
    let mut since_best = 0;

    let mut direction: Vec<f64> = grad.iter().map(|g| -g).collect();
    let mut grad_old = vec![0.0; n];
    let mut grad_plus = vec![0.0; n];
    let mut w_trial = vec![0.0; n];
    let mut lambda = LAMBDA_INIT;
    let (mut mu, mut kappa, mut theta) = (0.0, 0.0, 0.0);
    let mut success = true;
    let mut successes = 0;
    let mut epoch = 0;

    let stop = loop {
        if since_best >= config.patience {
            break StopReason::Patience;
        }
        if epoch >= config.max_epochs {
            break StopReason::MaxEpochs;
        }
        epoch += 1;

        if success {
            mu = dot(&direction, &grad);
            if mu >= 0.0 {
                for (d, g) in direction.iter_mut().zip(&grad) {
                    *d = -g;
                }
                mu = dot(&direction, &grad);
            }
            kappa = dot(&direction, &direction);
            if kappa < MIN_DIRECTION_NORM2 {
                break StopReason::Converged;
            }
            // curvature along the direction by a finite difference of gradients
            let sigma = SIGMA0 / kappa.sqrt();
            for ((t, w), d) in w_trial.iter_mut().zip(&w).zip(&direction) {
                *t = w + sigma * d;
            }
            shape.evaluate(&w_trial, train, Some(&mut grad_plus));
            theta = direction
                .iter()
                .zip(grad_plus.iter().zip(&grad))
                .map(|(d, (gp, g))| d * (gp - g))
                .sum::<f64>()
                / sigma;
        }

        // make the scaled curvature positive
        let mut delta = theta + lambda * kappa;
        if delta <= 0.0 {
            delta = lambda * kappa;
            lambda -= theta / kappa;
        }
        let alpha = -mu / delta;
        for ((t, w), d) in w_trial.iter_mut().zip(&w).zip(&direction) {
            *t = w + alpha * d;
        }
        let f_new = shape.evaluate(&w_trial, train, None);
        if !f_new.is_finite() {
            return Err(MlpError::NonFiniteLoss { epoch });
        }
        // ratio of actual to predicted decrease
        let comparison = 2.0 * (f_new - f) / (alpha * mu);
        success = comparison >= 0.0;

        if success {
            let step_max = direction
                .iter()
                .map(|d| (alpha * d).abs())
                .fold(0.0, f64::max);
            let f_change = (f_new - f).abs();
            std::mem::swap(&mut w, &mut w_trial);
            f = f_new;
            std::mem::swap(&mut grad_old, &mut grad);
            shape.evaluate(&w, train, Some(&mut grad));
            successes += 1;

            let val = shape.evaluate(&w, validation, None);
            if val < best_val {
                best_val = val;
                best_w.copy_from_slice(&w);
                best_epoch = epoch;
                since_best = 0;
            } else {
                since_best += 1;
            }
            if step_max < 1e-12 && f_change < 1e-14 {
                break StopReason::Converged;
            }
            if dot(&grad, &grad) == 0.0 {
                break StopReason::Converged;
            }
        }

        if comparison < 0.25 {
            lambda = (4.0 * lambda).min(LAMBDA_MAX);
        }
        if comparison > 0.75 {
            lambda = (0.5 * lambda).max(LAMBDA_MIN);
        }
        if lambda >= LAMBDA_MAX {
            break StopReason::Stalled;
        }

        if successes == n {
            for (d, g) in direction.iter_mut().zip(&grad) {
                *d = -g;
            }
            successes = 0;
        } else if success {
            let beta = grad_old
                .iter()
                .zip(&grad)
                .map(|(go, g)| (go - g) * g)
                .sum::<f64>()
                / mu;
            for (d, g) in direction.iter_mut().zip(&grad) {
                *d = beta * *d - g;
            }
        }
    };

    Ok(ScgOutcome {
        model: Mlp {
            shape,
            params: best_w,
        },
        best_validation_loss: best_val,
        best_epoch,
        epochs_run: epoch,
        stop,
    })
}

/// Seed of restart `index` under base seed `base`.
pub fn restart_seed(base: u64, index: usize) -> u64 {
    seed::derive(base, &[1, index as u64])
}

/// Seeded unstratified (fit, validation) split; validation gets
/// `round(fraction * n)` examples.
pub fn validation_split(data: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let n = data.len();
    let k = dataset::rounded_share(fraction, n);
    if k == 0 || k >= n {
        return Err(MlpError::Data(DataError::InvalidSplit(format!(
            "validation fraction {fraction} of {n} examples leaves an empty side"
        ))));
    }
    let (fit, val) = dataset::random_partition(n, k, seed);
    Ok((data.subset(&fit), data.subset(&val)))
}

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub model: Mlp,
    pub validation_loss: f64,
    pub best_restart: usize,
    /// Validation loss of every restart, `None` where the restart failed.
    pub restart_losses: Vec<Option<f64>>,
}

/// Splits `full_train` into fit/validation parts once, trains
/// `num_restarts` networks from different initial weights and keeps the
/// one with the lowest validation loss.
pub fn train_with_restarts(config: &MlpConfig, full_train: &Dataset) -> Result<RestartOutcome> {
    config.validate()?;
    let (fit, val) = validation_split(
        full_train,
        config.validation_fraction,
        seed::derive(config.init_seed, &[0]),
    )?;
    let results: Vec<Result<ScgOutcome>> = (0..config.num_restarts)
        .into_par_iter()
        .map(|r| scg_train(&config.with_seed(restart_seed(config.init_seed, r)), &fit, &val))
        .collect();

    let restart_losses = results
        .iter()
        .map(|r| r.as_ref().ok().map(|o| o.best_validation_loss))
        .collect();
    let mut best: Option<(usize, ScgOutcome)> = None;
    let mut last_err = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(o) => {
                if best
                    .as_ref()
                    .is_none_or(|(_, b)| o.best_validation_loss < b.best_validation_loss)
                {
                    best = Some((i, o));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match best {
        Some((best_restart, o)) => Ok(RestartOutcome {
            model: o.model,
            validation_loss: o.best_validation_loss,
            best_restart,
            restart_losses,
        }),
        None => Err(MlpError::AllRestartsFailed {
            restarts: config.num_restarts,
            last: Box::new(last_err.expect("at least one restart ran")),
        }),
    }
}

/// A network together with the normalization fitted on its training data.
#[derive(Debug, Clone)]
pub struct Classifier {
    pub stats: NormalizationStats,
    pub model: Mlp,
}

impl Classifier {
    /// Class probabilities for a raw (unnormalized) attribute vector.
    pub fn predict_proba(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.model.forward(&self.stats.transform(x)?)
    }
}

/// Normalizes `train` with statistics fitted on it, then trains with
/// restarts.
pub fn fit_classifier(config: &MlpConfig, train: &Dataset) -> Result<Classifier> {
    let stats = NormalizationStats::fit(train)?;
    let normalized = stats.apply(train)?;
    let outcome = train_with_restarts(config, &normalized)?;
    Ok(Classifier {
        stats,
        model: outcome.model,
    })
}
