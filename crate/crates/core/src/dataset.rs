//! Classification datasets: CSV loading, z-score normalization, random
//! train/test splits and the on-line example stream.
//!
//! The CSV layout is the plain UCI one: attributes in the leading columns,
//! the class label in the last column. Labels may be any string; they are
//! mapped to class indices in order of first appearance.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {message}")]
    Parse { row: u64, message: String },
    #[error("dataset is empty")]
    Empty,
    #[error("dataset needs at least 2 classes, found {0}")]
    TooFewClasses(usize),
    #[error("dimension mismatch: expected {expected} attributes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("label {label} out of range for {num_classes} classes")]
    LabelOutOfRange { label: usize, num_classes: usize },
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid stream: {0}")]
    InvalidStream(String),
}

pub type Result<T, E = DataError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub attributes: Vec<f64>,
    pub label: usize,
}

impl Example {
    pub fn new(attributes: Vec<f64>, label: usize) -> Self {
        Self { attributes, label }
    }
}

/// An ordered collection of labelled examples over `num_classes` classes.
///
/// Subsets (splits, stream prefixes, extended sets) keep the parent's class
/// list so that label indices stay comparable across them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    examples: Vec<Example>,
    num_attributes: usize,
    class_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        examples: Vec<Example>,
        num_attributes: usize,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if num_attributes == 0 {
            return Err(DataError::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        if class_names.len() < 2 {
            return Err(DataError::TooFewClasses(class_names.len()));
        }
        for ex in &examples {
            if ex.attributes.len() != num_attributes {
                return Err(DataError::DimensionMismatch {
                    expected: num_attributes,
                    actual: ex.attributes.len(),
                });
            }
            if ex.label >= class_names.len() {
                return Err(DataError::LabelOutOfRange {
                    label: ex.label,
                    num_classes: class_names.len(),
                });
            }
        }
        Ok(Self {
            examples,
            num_attributes,
            class_names,
        })
    }

    /// Builds a dataset with classes named `"0"`, `"1"`, ...
    pub fn with_num_classes(
        examples: Vec<Example>,
        num_attributes: usize,
        num_classes: usize,
    ) -> Result<Self> {
        let names = (0..num_classes).map(|c| c.to_string()).collect();
        Self::new(examples, num_attributes, names)
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn num_attributes(&self) -> usize {
        self.num_attributes
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.examples.iter().map(|e| e.label)
    }

    /// Number of examples per class index.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes()];
        for label in self.labels() {
            counts[label] += 1;
        }
        counts
    }

    /// Same schema, different examples. Examples are assumed valid for it.
    pub fn with_examples(&self, examples: Vec<Example>) -> Self {
        debug_assert!(examples
            .iter()
            .all(|e| e.attributes.len() == self.num_attributes && e.label < self.num_classes()));
        Self {
            examples,
            num_attributes: self.num_attributes,
            class_names: self.class_names.clone(),
        }
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        self.with_examples(indices.iter().map(|&i| self.examples[i].clone()).collect())
    }

    /// The first `n` examples (or all of them if there are fewer).
    pub fn prefix(&self, n: usize) -> Self {
        self.with_examples(self.examples[..n.min(self.len())].to_vec())
    }

    /// Copy of the dataset in a seeded random order.
    pub fn shuffled(&self, seed: u64) -> Self {
        let mut examples = self.examples.clone();
        examples.shuffle(&mut seed::rng(seed));
        self.with_examples(examples)
    }

    pub fn push(&mut self, example: Example) -> Result<()> {
        if example.attributes.len() != self.num_attributes {
            return Err(DataError::DimensionMismatch {
                expected: self.num_attributes,
                actual: example.attributes.len(),
            });
        }
        if example.label >= self.num_classes() {
            return Err(DataError::LabelOutOfRange {
                label: example.label,
                num_classes: self.num_classes(),
            });
        }
        self.examples.push(example);
        Ok(())
    }
}

/// Column layout of a dataset CSV file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvSchema {
    /// Skip the first line.
    pub has_header: bool,
    /// Expected attribute count; inferred from the first data row when `None`.
    pub num_attributes: Option<usize>,
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, schema)
}

pub fn read_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(schema.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut examples = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut class_index: HashMap<String, usize> = HashMap::new();
    let mut num_attributes = schema.num_attributes;

    for record in rdr.records() {
        let record = record.map_err(|e| DataError::Parse {
            row: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < 2 {
            return Err(DataError::Parse {
                row,
                message: format!("expected attributes and a label, found {} column(s)", record.len()),
            });
        }
        let d = *num_attributes.get_or_insert(record.len() - 1);
        if record.len() != d + 1 {
            return Err(DataError::Parse {
                row,
                message: format!("expected {} columns, found {}", d + 1, record.len()),
            });
        }
        let attributes = record
            .iter()
            .take(d)
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    DataError::Parse {
                        row,
                        message: format!("column {}: non-numeric attribute {field:?}", col + 1),
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let name = &record[d];
        let label = match class_index.get(name) {
            Some(&i) => i,
            None => {
                let i = class_names.len();
                class_index.insert(name.to_string(), i);
                class_names.push(name.to_string());
                i
            }
        };
        examples.push(Example { attributes, label });
    }

    if examples.is_empty() {
        return Err(DataError::Empty);
    }
    Dataset::new(examples, num_attributes.unwrap_or(0), class_names)
}

/// Per-attribute mean and (population) standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationStats {
    pub means: Vec<f64>,
    /// Zero-variance attributes store 1 here so they map to a constant 0.
    pub std_devs: Vec<f64>,
}

impl NormalizationStats {
    pub fn fit(train: &Dataset) -> Result<Self> {
        Self::fit_rows(train.examples().iter().map(|e| e.attributes.as_slice()))
    }

    pub fn fit_rows<'a>(rows: impl IntoIterator<Item = &'a [f64]> + Clone) -> Result<Self> {
        let mut iter = rows.clone().into_iter();
        let d = iter.next().ok_or(DataError::Empty)?.len();
        let mut n = 0usize;
        let mut means = vec![0.0; d];
        for row in rows.clone() {
            if row.len() != d {
                return Err(DataError::DimensionMismatch {
                    expected: d,
                    actual: row.len(),
                });
            }
            for (m, x) in means.iter_mut().zip(row) {
                *m += x;
            }
            n += 1;
        }
        for m in &mut means {
            *m /= n as f64;
        }
        let mut vars = vec![0.0; d];
        for row in rows {
            for ((v, x), m) in vars.iter_mut().zip(row).zip(&means) {
                *v += (x - m) * (x - m);
            }
        }
        let std_devs = vars
            .into_iter()
            .map(|v| {
                let sd = (v / n as f64).sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Self { means, std_devs })
    }

    pub fn num_attributes(&self) -> usize {
        self.means.len()
    }

    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        Ok(x.iter()
            .zip(&self.means)
            .zip(&self.std_devs)
            .map(|((x, m), s)| (x - m) / s)
            .collect())
    }

    pub fn inverse_transform(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(z.len())?;
        Ok(z.iter()
            .zip(&self.means)
            .zip(&self.std_devs)
            .map(|((z, m), s)| z * s + m)
            .collect())
    }

    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        self.check_dim(data.num_attributes())?;
        let examples = data
            .examples()
            .iter()
            .map(|e| Ok(Example::new(self.transform(&e.attributes)?, e.label)))
            .collect::<Result<Vec<_>>>()?;
        Ok(data.with_examples(examples))
    }

    fn check_dim(&self, actual: usize) -> Result<()> {
        if actual == self.num_attributes() {
            Ok(())
        } else {
            Err(DataError::DimensionMismatch {
                expected: self.num_attributes(),
                actual,
            })
        }
    }
}

pub fn fit_normalization(train: &Dataset) -> Result<NormalizationStats> {
    NormalizationStats::fit(train)
}

pub fn apply_normalization(stats: &NormalizationStats, data: &Dataset) -> Result<Dataset> {
    stats.apply(data)
}

/// Repeated random train/test partitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub test_fraction: f64,
    pub num_repeats: usize,
}

impl SplitPlan {
    pub fn new(seed: u64, test_fraction: f64, num_repeats: usize) -> Result<Self> {
        let plan = Self {
            seed,
            test_fraction,
            num_repeats,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(DataError::InvalidSplit(format!(
                "test fraction {} not in (0, 1)",
                self.test_fraction
            )));
        }
        if self.num_repeats == 0 {
            return Err(DataError::InvalidSplit("num_repeats must be at least 1".into()));
        }
        Ok(())
    }

    /// `round(fraction * n)` with halves rounded up.
    pub fn test_size(&self, n: usize) -> usize {
        rounded_share(self.test_fraction, n)
    }

    /// Sorted (train, test) index sets for one repeat.
    pub fn indices(&self, n: usize, repeat_index: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        self.validate()?;
        if repeat_index >= self.num_repeats {
            return Err(DataError::InvalidSplit(format!(
                "repeat {repeat_index} out of range for {} repeats",
                self.num_repeats
            )));
        }
        let test_size = self.test_size(n);
        if test_size == 0 || test_size >= n {
            return Err(DataError::InvalidSplit(format!(
                "fraction {} of {n} examples leaves an empty side",
                self.test_fraction
            )));
        }
        Ok(random_partition(
            n,
            test_size,
            seed::derive(self.seed, &[repeat_index as u64]),
        ))
    }
}

pub(crate) fn rounded_share(fraction: f64, n: usize) -> usize {
    (fraction * n as f64 + 0.5).floor() as usize
}

/// Shuffles `0..n` and returns (rest, first `k`), each sorted ascending.
pub(crate) fn random_partition(n: usize, k: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut seed::rng(seed));
    let mut picked = idx[..k].to_vec();
    let mut rest = idx[k..].to_vec();
    picked.sort_unstable();
    rest.sort_unstable();
    (rest, picked)
}

pub fn split(dataset: &Dataset, plan: &SplitPlan, repeat_index: usize) -> Result<(Dataset, Dataset)> {
    let (train, test) = plan.indices(dataset.len(), repeat_index)?;
    Ok((dataset.subset(&train), dataset.subset(&test)))
}

/// One prediction step of the on-line protocol.
#[derive(Debug, Clone)]
pub struct OnlineStep {
    /// 1-based position of `next` in the stream.
    pub position: usize,
    /// All examples preceding `next` in stream order.
    pub train: Dataset,
    pub next: Example,
}

/// Iterator over on-line prediction steps. The true label of each example
/// joins the training set once its step has been yielded.
#[derive(Debug, Clone)]
pub struct OnlineStream {
    ordered: Dataset,
    cursor: usize,
}

impl OnlineStream {
    pub fn num_steps(&self) -> usize {
        self.ordered.len() - self.cursor
    }

    /// The examples in presentation order.
    pub fn order(&self) -> &Dataset {
        &self.ordered
    }
}

impl Iterator for OnlineStream {
    type Item = OnlineStep;

    fn next(&mut self) -> Option<OnlineStep> {
        if self.cursor >= self.ordered.len() {
            return None;
        }
        let step = OnlineStep {
            position: self.cursor + 1,
            train: self.ordered.prefix(self.cursor),
            next: self.ordered.examples()[self.cursor].clone(),
        };
        self.cursor += 1;
        Some(step)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.num_steps();
        (n, Some(n))
    }
}

impl ExactSizeIterator for OnlineStream {}

/// Streams `dataset` after one seeded shuffle, starting with `initial_size`
/// examples already revealed.
pub fn online_stream(dataset: &Dataset, initial_size: usize, seed: u64) -> Result<OnlineStream> {
    if initial_size >= dataset.len() {
        return Err(DataError::InvalidStream(format!(
            "initial size {initial_size} leaves no examples to predict out of {}",
            dataset.len()
        )));
    }
    Ok(OnlineStream {
        ordered: dataset.shuffled(seed),
        cursor: initial_size,
    })
}
