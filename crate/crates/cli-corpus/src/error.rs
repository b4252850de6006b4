use std::path::PathBuf;

use exact_rings::RingError;
use pcsp_model::ModelError;
use rounding_pipelines::PipelineError;
use thiserror::Error;

/// Anything that makes an invocation exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: at {at}: {msg}")]
    Json { path: PathBuf, at: String, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("built-in entry {template} / {family} fails its own check")]
    CorpusSelfCheck { template: &'static str, family: &'static str },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
