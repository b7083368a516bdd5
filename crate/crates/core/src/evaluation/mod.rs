//! Experiment protocols comparing Venn predictors with the plain network.

mod batch;
pub mod metrics;
mod online;
pub mod pvalue;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::DataError;
use crate::mlp::MlpError;
use crate::taxonomy::TaxonomyRule;
use crate::venn::VennError;

pub use batch::{
    collect_batch_predictions, run_batch, BatchOptions, BatchReport, MethodMetrics,
    PooledPredictions,
};
pub use metrics::{reliability, BatchMetrics, ReliabilityBin, ReliabilityBinning};
pub use online::{
    run_online_nn, run_online_vp, run_online_vp_multi, CurvePoint, OnlineCurves, OnlineOptions,
    OnlineRun, OnlineSummary, StepRecord,
};
pub use pvalue::{two_sided_pvalue, PValue};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Training(#[from] MlpError),
    #[error(transparent)]
    Venn(#[from] VennError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A probabilistic classifier under evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Method {
    /// The network's own softmax outputs.
    NeuralNet,
    Venn(TaxonomyRule),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NeuralNet => f.write_str("NN"),
            Self::Venn(rule) => write!(f, "NN-VP {}", rule.kind),
        }
    }
}
