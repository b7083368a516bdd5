//! Venn taxonomies over network output vectors.
//!
//! A taxonomy assigns each example to a category using only the outputs the
//! underlying network produced for it:
//!
//! * `V1`: the class with the largest output.
//! * `V2`: `V1`, split by whether the largest output is at least `theta`.
//! * `V3`: `V1`, split by whether the second largest output is at least `theta`.
//! * `V4`: `V1`, split by whether the gap between the two largest outputs is at least `theta`.
//! * `V5`: the set of classes whose output is at least `theta`.
//!
//! Comparisons are non-strict, with a slack of [`THRESHOLD_SLACK`] so that
//! ties survive floating-point rounding (`0.7 - 0.2` counts as `>= 0.5`).
//! Argmax ties go to the lowest class index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TaxonomyError {
    #[error("theta {theta} outside {range} for {kind}")]
    ThetaOutOfRange {
        kind: TaxonomyKind,
        theta: f64,
        range: String,
    },
    #[error("not a probability vector: {0}")]
    NotAProbabilityVector(String),
    #[error("unknown taxonomy {0:?} (expected v1..v5)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TaxonomyKind {
    V1,
    V2,
    V3,
    V4,
    V5,
}

impl TaxonomyKind {
    pub const ALL: [TaxonomyKind; 5] = [Self::V1, Self::V2, Self::V3, Self::V4, Self::V5];

    pub fn default_theta(self) -> f64 {
        match self {
            Self::V1 => 0.0,
            Self::V2 => 0.75,
            Self::V3 => 0.25,
            Self::V4 => 0.5,
            Self::V5 => 0.25,
        }
    }

    /// Upper bound on the number of distinct categories for `c` classes.
    pub fn max_categories(self, c: usize) -> usize {
        match self {
            Self::V1 => c,
            Self::V2 | Self::V3 | Self::V4 => 2 * c,
            Self::V5 => 1usize.checked_shl(c as u32).unwrap_or(usize::MAX),
        }
    }
}

impl fmt::Display for TaxonomyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::V1 => "V1",
            Self::V2 => "V2",
            Self::V3 => "V3",
            Self::V4 => "V4",
            Self::V5 => "V5",
        };
        f.write_str(s)
    }
}

impl FromStr for TaxonomyKind {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "v1" => Ok(Self::V1),
            "v2" => Ok(Self::V2),
            "v3" => Ok(Self::V3),
            "v4" => Ok(Self::V4),
            "v5" => Ok(Self::V5),
            _ => Err(TaxonomyError::UnknownKind(s.to_string())),
        }
    }
}

/// A taxonomy together with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyRule {
    pub kind: TaxonomyKind,
    /// Ignored by `V1`.
    pub theta: f64,
}

impl TaxonomyRule {
    pub fn new(kind: TaxonomyKind, theta: f64) -> Result<Self, TaxonomyError> {
        let rule = Self { kind, theta };
        rule.check_theta(None)?;
        Ok(rule)
    }

    pub fn with_default_theta(kind: TaxonomyKind) -> Self {
        Self {
            kind,
            theta: kind.default_theta(),
        }
    }

    /// Checks the threshold range; the `V2` lower bound `1/c` is only
    /// checked once `c` is known.
    pub fn check_theta(&self, num_classes: Option<usize>) -> Result<(), TaxonomyError> {
        let t = self.theta;
        let (ok, range) = match self.kind {
            TaxonomyKind::V1 => (true, String::new()),
            TaxonomyKind::V2 => {
                let lo = num_classes.map_or(0.0, |c| 1.0 / c as f64);
                (t > lo && t < 1.0, format!("({lo}, 1)"))
            }
            TaxonomyKind::V3 | TaxonomyKind::V5 => (t > 0.0 && t < 0.5, "(0, 0.5)".into()),
            TaxonomyKind::V4 => (t > 0.0 && t < 1.0, "(0, 1)".into()),
        };
        if ok {
            Ok(())
        } else {
            Err(TaxonomyError::ThetaOutOfRange {
                kind: self.kind,
                theta: t,
                range,
            })
        }
    }

    pub fn category_of(&self, outputs: &[f64]) -> Result<CategoryKey, TaxonomyError> {
        category_of(self, outputs)
    }
}

impl fmt::Display for TaxonomyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TaxonomyKind::V1 => write!(f, "V1"),
            k => write!(f, "{k}(theta={})", self.theta),
        }
    }
}

/// Category of one example under some taxonomy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoryKey {
    V1(usize),
    V2 { class: usize, above: bool },
    V3 { class: usize, above: bool },
    V4 { class: usize, above: bool },
    /// Sorted class indices, possibly empty.
    V5(Vec<usize>),
}

impl CategoryKey {
    /// The `V1` key these outputs would get, for `V1`-`V4` keys.
    pub fn coarsened(&self) -> Option<CategoryKey> {
        match *self {
            Self::V1(c)
            | Self::V2 { class: c, .. }
            | Self::V3 { class: c, .. }
            | Self::V4 { class: c, .. } => Some(Self::V1(c)),
            Self::V5(_) => None,
        }
    }
}

impl fmt::Display for CategoryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |above: bool| if above { "above" } else { "below" };
        match self {
            Self::V1(c) => write!(f, "V1:{c}"),
            Self::V2 { class, above } => write!(f, "V2:{class}:{}", flag(*above)),
            Self::V3 { class, above } => write!(f, "V3:{class}:{}", flag(*above)),
            Self::V4 { class, above } => write!(f, "V4:{class}:{}", flag(*above)),
            Self::V5(set) => {
                let items: Vec<String> = set.iter().map(|c| c.to_string()).collect();
                write!(f, "V5:{{{}}}", items.join(","))
            }
        }
    }
}

const SUM_TOLERANCE: f64 = 1e-6;

/// Values within this distance below a threshold still count as reaching it.
pub const THRESHOLD_SLACK: f64 = 1e-12;

fn reaches(value: f64, theta: f64) -> bool {
    value >= theta - THRESHOLD_SLACK
}

fn check_probabilities(outputs: &[f64]) -> Result<(), TaxonomyError> {
    if outputs.len() < 2 {
        return Err(TaxonomyError::NotAProbabilityVector(format!(
            "{} entries",
            outputs.len()
        )));
    }
    if let Some(bad) = outputs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(TaxonomyError::NotAProbabilityVector(format!("entry {bad}")));
    }
    let sum: f64 = outputs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(TaxonomyError::NotAProbabilityVector(format!("sum {sum}")));
    }
    Ok(())
}

/// Index and value of the largest and second largest entries; ties go to
/// the lower index.
fn top_two(outputs: &[f64]) -> (usize, f64, f64) {
    let mut best = 0;
    for (j, &p) in outputs.iter().enumerate().skip(1) {
        if p > outputs[best] {
            best = j;
        }
    }
    let second = outputs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != best)
        .map(|(_, &p)| p)
        .fold(f64::NEG_INFINITY, f64::max);
    (best, outputs[best], second)
}

pub fn category_of(rule: &TaxonomyRule, outputs: &[f64]) -> Result<CategoryKey, TaxonomyError> {
    check_probabilities(outputs)?;
    rule.check_theta(Some(outputs.len()))?;
    let (class, max, second) = top_two(outputs);
    let theta = rule.theta;
    Ok(match rule.kind {
        TaxonomyKind::V1 => CategoryKey::V1(class),
        TaxonomyKind::V2 => CategoryKey::V2 {
            class,
            above: reaches(max, theta),
        },
        TaxonomyKind::V3 => CategoryKey::V3 {
            class,
            above: reaches(second, theta),
        },
        TaxonomyKind::V4 => CategoryKey::V4 {
            class,
            above: reaches(max - second, theta),
        },
        TaxonomyKind::V5 => CategoryKey::V5(
            outputs
                .iter()
                .enumerate()
                .filter(|&(_, &p)| reaches(p, theta))
                .map(|(j, _)| j)
                .collect(),
        ),
    })
}
