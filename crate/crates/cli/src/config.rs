//! Resolved run configuration, written next to every run's outputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use venn_nn::dataset::{CsvSchema, SplitPlan};
use venn_nn::evaluation::{BatchOptions, OnlineOptions};
use venn_nn::mlp::MlpConfig;
use venn_nn::seed;
use venn_nn::taxonomy::{TaxonomyKind, TaxonomyRule};

use crate::args::{BatchArgs, ExperimentArgs, OnlineArgs};
use crate::error::CliError;

pub const CONFIG_FILE: &str = "run_config.json";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub format_version: u32,
    pub dataset: DatasetSpec,
    /// Root of every seed used by the run.
    pub seed: u64,
    pub network: NetworkSpec,
    pub taxonomies: Vec<TaxonomyRule>,
    pub protocol: Protocol,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub has_header: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub hidden_units: usize,
    pub restarts: usize,
    pub validation_fraction: f64,
    pub max_epochs: usize,
    pub patience: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Protocol {
    Online {
        initial_size: usize,
        subsample: Option<usize>,
        baseline: bool,
    },
    Batch {
        repeats: usize,
        test_fraction: f64,
        reliability_bins: usize,
        venn_restarts: Option<usize>,
    },
}

fn rules(args: &ExperimentArgs, none_requested: bool) -> Result<Vec<TaxonomyRule>, CliError> {
    if none_requested {
        return Ok(Vec::new());
    }
    let mut kinds: Vec<TaxonomyKind> = if args.taxonomies.is_empty() {
        TaxonomyKind::ALL.to_vec()
    } else {
        args.taxonomies.clone()
    };
    kinds.sort();
    kinds.dedup();
    match args.theta {
        Some(theta) if kinds.len() == 1 => Ok(vec![TaxonomyRule::new(kinds[0], theta)
            .map_err(|e| CliError::Usage(e.to_string()))?]),
        Some(_) => Err(CliError::Usage(
            "--theta needs exactly one --taxonomy".into(),
        )),
        None => Ok(kinds.into_iter().map(TaxonomyRule::with_default_theta).collect()),
    }
}

fn common(args: &ExperimentArgs, taxonomies: Vec<TaxonomyRule>, protocol: Protocol) -> RunConfig {
    RunConfig {
        format_version: FORMAT_VERSION,
        dataset: DatasetSpec {
            path: args.data.dataset.clone(),
            has_header: args.data.header,
        },
        seed: args.seed,
        network: NetworkSpec {
            hidden_units: args.hidden,
            restarts: args.restarts,
            validation_fraction: 0.30,
            max_epochs: args.max_epochs,
            patience: args.patience,
        },
        taxonomies,
        protocol,
    }
}

impl RunConfig {
    pub fn from_online(args: &OnlineArgs) -> Result<Self, CliError> {
        let taxonomies = rules(&args.common, args.baseline_only)?;
        let config = common(
            &args.common,
            taxonomies,
            Protocol::Online {
                initial_size: args.initial_size,
                subsample: args.subsample,
                baseline: args.baseline || args.baseline_only,
            },
        );
        config.validate()?;
        Ok(config)
    }

    pub fn from_batch(args: &BatchArgs) -> Result<Self, CliError> {
        let taxonomies = rules(&args.common, false)?;
        let config = common(
            &args.common,
            taxonomies,
            Protocol::Batch {
                repeats: args.repeats,
                test_fraction: args.test_fraction,
                reliability_bins: args.reliability_bins,
                venn_restarts: args.venn_restarts,
            },
        );
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        if config.format_version != FORMAT_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported config format_version {}",
                config.format_version
            )));
        }
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("config serializes");
        text.push('\n');
        text
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.mlp_config()
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        for rule in &self.taxonomies {
            rule.check_theta(None)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        match self.protocol {
            Protocol::Online {
                baseline,
                subsample,
                ..
            } => {
                if self.taxonomies.is_empty() && !baseline {
                    return Err(CliError::Usage("nothing to run".into()));
                }
                if subsample == Some(0) {
                    return Err(CliError::Usage("--subsample must be at least 1".into()));
                }
            }
            Protocol::Batch {
                reliability_bins,
                venn_restarts,
                ..
            } => {
                self.split_plan()
                    .expect("batch protocol")
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                if reliability_bins == 0 {
                    return Err(CliError::Usage("--reliability-bins must be at least 1".into()));
                }
                if venn_restarts == Some(0) {
                    return Err(CliError::Usage("--venn-restarts must be at least 1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn schema(&self) -> CsvSchema {
        CsvSchema {
            has_header: self.dataset.has_header,
            num_attributes: None,
        }
    }

    /// Network settings; the initial-weight seed is `derive(seed, [2])`.
    pub fn mlp_config(&self) -> MlpConfig {
        let n = &self.network;
        MlpConfig {
            hidden_units: n.hidden_units,
            num_restarts: n.restarts,
            validation_fraction: n.validation_fraction,
            max_epochs: n.max_epochs,
            patience: n.patience,
            init_seed: seed::derive(self.seed, &[2]),
        }
    }

    /// Presentation order is shuffled with `derive(seed, [1])`.
    pub fn online_options(&self) -> Option<(OnlineOptions, bool)> {
        match self.protocol {
            Protocol::Online {
                initial_size,
                subsample,
                baseline,
            } => Some((
                OnlineOptions {
                    initial_size,
                    stream_seed: seed::derive(self.seed, &[1]),
                    max_steps: subsample,
                },
                baseline,
            )),
            Protocol::Batch { .. } => None,
        }
    }

    /// Splits are drawn with `derive(seed, [3])`.
    pub fn split_plan(&self) -> Option<Result<SplitPlan, venn_nn::dataset::DataError>> {
        match self.protocol {
            Protocol::Batch {
                repeats,
                test_fraction,
                ..
            } => Some(SplitPlan::new(
                seed::derive(self.seed, &[3]),
                test_fraction,
                repeats,
            )),
            Protocol::Online { .. } => None,
        }
    }

    pub fn batch_options(&self) -> Option<BatchOptions> {
        match self.protocol {
            Protocol::Batch {
                reliability_bins,
                venn_restarts,
                ..
            } => Some(BatchOptions {
                reliability_bins,
                venn_restarts,
            }),
            Protocol::Online { .. } => None,
        }
    }
}
