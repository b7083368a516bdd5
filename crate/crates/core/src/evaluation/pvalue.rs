//! Two-sided test of an observed error count against per-step error
//! probabilities.
//!
//! Step errors are modelled as independent Bernoulli(`q_i`) draws, so the
//! total is Poisson-binomial with mean `sum q_i` and variance
//! `sum q_i (1 - q_i)`. The p-value uses the normal approximation with a
//! continuity correction.

use serde::{Deserialize, Serialize};


use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    pub value: f64,
    /// Zero variance: every `q_i` is 0 or 1, so the approximation is void
    /// and the value is 1 or 0 depending on whether the count matches.
    pub degenerate: bool,
}

/// Upper tail of the standard normal distribution.
fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

pub fn two_sided_pvalue(errors: usize, error_probs: &[f64]) -> Result<PValue, EvalError> {
    if let Some(q) = error_probs.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(EvalError::InvalidInput(format!(
            "error probability {q} outside [0, 1]"
        )));
    }
    let mean: f64 = error_probs.iter().sum();
    let variance: f64 = error_probs.iter().map(|q| q * (1.0 - q)).sum();
    let deviation = (errors as f64 - mean).abs();
    if variance <= 0.0 {
        let value = if deviation < 0.5 { 1.0 } else { 0.0 };
        return Ok(PValue {
            value,
            degenerate: true,
        });
    }
    let z = (deviation - 0.5) / variance.sqrt();
    Ok(PValue {
        value: (2.0 * normal_sf(z)).min(1.0),
        degenerate: false,
    })
}
