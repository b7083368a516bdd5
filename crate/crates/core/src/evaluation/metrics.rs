//! Probabilistic quality metrics over a pooled set of predictions.

use serde::{Deserialize, Serialize};

use crate::mlp::PROB_FLOOR;

/// Index of the largest probability, lowest index on ties.
pub fn argmax(probs: &[f64]) -> usize {
    let mut best = 0;
    for (j, &p) in probs.iter().enumerate().skip(1) {
        if p > probs[best] {
            best = j;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchMetrics {
    pub accuracy: f64,
    /// Summed over examples, not averaged.
    pub cross_entropy: f64,
    pub brier: f64,
    pub reliability: f64,
    pub num_examples: usize,
}

impl BatchMetrics {
    pub fn compute(probs: &[Vec<f64>], labels: &[usize], reliability_bins: usize) -> Self {
        Self {
            accuracy: accuracy(probs, labels),
            cross_entropy: cross_entropy(probs, labels),
            brier: brier_score(probs, labels),
            reliability: reliability(probs, labels, reliability_bins),
            num_examples: labels.len(),
        }
    }
}

pub fn accuracy(probs: &[Vec<f64>], labels: &[usize]) -> f64 {
    let correct = probs
        .iter()
        .zip(labels)
        .filter(|(p, &y)| argmax(p) == y)
        .count();
    correct as f64 / labels.len() as f64
}

/// `-sum_i ln(o_i[y_i])` with probabilities clamped to `[1e-12, 1]`.
pub fn cross_entropy(probs: &[Vec<f64>], labels: &[usize]) -> f64 {
    probs
        .iter()
        .zip(labels)
        .map(|(p, &y)| -p[y].clamp(PROB_FLOOR, 1.0).ln())
        .sum()
}

/// Mean over examples of the squared distance to the one-hot truth.
pub fn brier_score(probs: &[Vec<f64>], labels: &[usize]) -> f64 {
    let total: f64 = probs
        .iter()
        .zip(labels)
        .map(|(p, &y)| {
            p.iter()
                .enumerate()
                .map(|(j, &o)| {
                    let t = if j == y { 1.0 } else { 0.0 };
                    (o - t) * (o - t)
                })
                .sum::<f64>()
        })
        .sum();
    total / labels.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityBin {
    /// Bin midpoint.
    pub typical: f64,
    pub count: usize,
    /// How many of the binned outputs belong to the example's true class.
    pub hits: usize,
}

impl ReliabilityBin {
    /// Observed frequency of the true class among the binned outputs.
    pub fn frequency(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.hits as f64 / self.count as f64
        }
    }
}

/// Bin `k` covers `[k/K, (k+1)/K)`, with the edges computed as `k as f64 / K`
/// so that values such as `0.29` land in bin 29 of 100 even though
/// `0.29 * 100.0` rounds below 29.
fn bin_index(p: f64, num_bins: usize) -> usize {
    let kf = num_bins as f64;
    let mut k = ((p * kf) as usize).min(num_bins - 1);
    if k + 1 < num_bins && p >= (k + 1) as f64 / kf {
        k += 1;
    } else if k > 0 && p < k as f64 / kf {
        k -= 1;
    }
    k
}

/// Every class probability of every example, sorted into `K` equal-width
/// bins over `[0, 1]`. The value 1 falls in the last bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityBinning {
    pub bins: Vec<ReliabilityBin>,
    pub num_examples: usize,
}

impl ReliabilityBinning {
    pub fn new(probs: &[Vec<f64>], labels: &[usize], num_bins: usize) -> Self {
        assert!(num_bins >= 1, "need at least one bin");
        let width = 1.0 / num_bins as f64;
        let mut bins: Vec<ReliabilityBin> = (0..num_bins)
            .map(|k| ReliabilityBin {
                typical: (k as f64 + 0.5) * width,
                count: 0,
                hits: 0,
            })
            .collect();
        for (p, &y) in probs.iter().zip(labels) {
            for (j, &o) in p.iter().enumerate() {
                let k = bin_index(o, num_bins);
                bins[k].count += 1;
                if j == y {
                    bins[k].hits += 1;
                }
            }
        }
        Self {
            bins,
            num_examples: labels.len(),
        }
    }

    /// `(1/N) sum_k n_k (r_k - phi_k)^2`, with `N` the number of examples.
    pub fn reliability(&self) -> f64 {
        let total: f64 = self
            .bins
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| {
                let diff = b.typical - b.frequency();
                b.count as f64 * diff * diff
            })
            .sum();
        total / self.num_examples as f64
    }
}

pub fn reliability(probs: &[Vec<f64>], labels: &[usize], num_bins: usize) -> f64 {
    ReliabilityBinning::new(probs, labels, num_bins).reliability()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bin_edges_are_exact() {
        assert_eq!(bin_index(0.29, 100), 29);
        assert_eq!(bin_index(0.57, 100), 57);
        assert_eq!(bin_index(0.0, 100), 0);
        assert_eq!(bin_index(1.0, 100), 99);
        assert_eq!(bin_index(0.5, 2), 1);
        for j in 0..200 {
            assert_eq!(bin_index(j as f64 / 200.0, 200), j);
        }
    }

    #[test]
    fn perfect_one_hot_predictions() {
        let probs = vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]];
        let m = BatchMetrics::compute(&probs, &[0, 2], 100);
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.cross_entropy, 0.0);
        assert_eq!(m.brier, 0.0);
        // bins [0, 0.01) and [0.99, 1] have midpoints 0.005 and 0.995
        assert!(m.reliability < 1e-4);
    }

    #[test]
    fn single_example_brier() {
        let b = brier_score(&[vec![0.8, 0.2]], &[0]);
        assert!((b - 0.08).abs() < 1e-15);
    }

    #[test]
    fn single_bin_reliability() {
        assert_eq!(reliability(&[vec![0.5, 0.5]], &[0], 1), 0.0);
        let binning = ReliabilityBinning::new(&[vec![0.5, 0.5]], &[0], 1);
        assert_eq!(binning.bins[0].count, 2);
        assert_eq!(binning.bins[0].frequency(), 0.5);
    }

    #[test]
    fn one_populated_bin_reduces_to_one_term() {
        let probs = vec![vec![0.52, 0.48], vec![0.47, 0.53], vec![0.5, 0.5]];
        let labels = [0, 0, 1];
        // K = 1: all six outputs share the bin with midpoint 0.5
        let rel = reliability(&probs, &labels, 1);
        let (n, r, phi) = (6.0, 0.5, 3.0 / 6.0);
        assert!((rel - n * (r - phi) * (r - phi) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_values_bin_correctly() {
        let binning = ReliabilityBinning::new(&[vec![1.0, 0.0], vec![0.25, 0.75]], &[0, 1], 4);
        let counts: Vec<usize> = binning.bins.iter().map(|b| b.count).collect();
        assert_eq!(counts, [1, 1, 0, 2]);
        assert_eq!(binning.bins[3].hits, 2);
    }

    #[test]
    fn accuracy_uses_lowest_index_on_ties() {
        assert_eq!(accuracy(&[vec![0.5, 0.5]], &[0]), 1.0);
        assert_eq!(accuracy(&[vec![0.5, 0.5]], &[1]), 0.0);
    }
}
