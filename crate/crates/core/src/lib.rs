//! Venn prediction with a neural-network underlying algorithm.
//!
//! A Venn predictor turns any classifier into one that outputs, for every
//! class, an interval of probabilities that is well calibrated under the
//! i.i.d. assumption. Here the underlying classifier is a single-hidden-layer
//! `tanh`/softmax network trained with scaled conjugate gradient, and five
//! taxonomies (`V1`..`V5`) decide how examples are grouped from the
//! network's outputs.
//!
//! * [`dataset`]: CSV loading, normalization, splits and on-line streams.
//! * [`mlp`]: the network, its loss and gradient, and the SCG trainer.
//! * [`taxonomy`]: output vector to category key.
//! * [`venn`]: multiprobability predictions and their aggregation.
//! * [`evaluation`]: on-line calibration curves and batch metrics.
//!
//! ```no_run
//! use venn_nn::dataset::{load_csv, CsvSchema};
//! use venn_nn::mlp::MlpConfig;
//! use venn_nn::taxonomy::{TaxonomyKind, TaxonomyRule};
//!
//! let data = load_csv("data/tae.csv", &CsvSchema::default())?;
//! let (train, rest) = data.examples().split_at(150);
//! let train = data.with_examples(train.to_vec());
//! let rule = TaxonomyRule::with_default_theta(TaxonomyKind::V4);
//! let result = venn_nn::venn::predict(&train, &rest[0].attributes, &rule, &MlpConfig::new(5))?;
//! println!("{:?} {:?}", result.predicted_label, result.error_interval);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod dataset;
pub mod evaluation;
pub mod mlp;
pub mod seed;
pub mod taxonomy;
pub mod venn;
