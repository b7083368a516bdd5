use std::path::Path;

use venn_nn::dataset::DataError;
use venn_nn::evaluation::EvalError;
use venn_nn::mlp::MlpError;
use venn_nn::venn::VennError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Training(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Training(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Data(m) | Self::Training(m) => m,
        }
    }

    pub fn write_failed(path: &Path, err: std::io::Error) -> Self {
        Self::Data(format!("cannot write {}: {err}", path.display()))
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<MlpError> for CliError {
    fn from(e: MlpError) -> Self {
        match e {
            MlpError::Data(d) => d.into(),
            MlpError::InvalidConfig(m) => Self::Usage(m),
            other => Self::Training(other.to_string()),
        }
    }
}

impl From<VennError> for CliError {
    fn from(e: VennError) -> Self {
        match e {
            VennError::Data(d) => d.into(),
            VennError::EmptyTrainingSet => Self::Data(e.to_string()),
            VennError::Taxonomy(t) => Self::Usage(t.to_string()),
            VennError::Training { source: MlpError::InvalidConfig(m), .. } => Self::Usage(m),
            other => Self::Training(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Data(d) => d.into(),
            EvalError::Training(t) => t.into(),
            EvalError::Venn(v) => v.into(),
            EvalError::InvalidInput(m) => Self::Usage(m),
        }
    }
}
