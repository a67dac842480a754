//! Full pipeline orchestration: ingest both eras, discover paths, score
//! productivity and labour composition, estimate queue parameters, and
//! write the result tables.

mod analysis;
pub mod schema;
mod simulation;
mod writers;

pub use analysis::{
    run_analysis, EraOnlyPath, LabourPair, QueueParamsRow, Report, ReportProvenance,
};
pub use simulation::{run_simulation, SimulationArtifacts};
pub use writers::write_report;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discovery::DiscoveryError;
use crate::eventlog::IngestError;
use crate::labour::LabourError;
use crate::model::ModelError;
use crate::queue::QueueError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

fn default_alpha() -> f64 {
    0.5
}

fn default_min_support() -> f64 {
    0.05
}

fn default_include_customer() -> bool {
    true
}

fn default_before_label() -> String {
    "before".to_string()
}

fn default_after_label() -> String {
    "after".to_string()
}

/// Everything `run_analysis` needs. Deserializable from a TOML file;
/// the command line can override any field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub before_log_path: PathBuf,
    pub after_log_path: PathBuf,
    pub classification_path: PathBuf,
    /// Activity performing the automated work in the after-era log.
    pub automated_task: String,
    /// Activity the automation replaced in the before-era log.
    /// Defaults to `automated_task` when the name did not change.
    #[serde(default)]
    pub replaced_task: Option<String>,
    /// Fixed share of freed time reallocated to other work; when unset
    /// it is estimated from the replaced task's duration change.
    #[serde(default)]
    pub kappa: Option<f64>,
    /// Output elasticity of the low-skilled labour input.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Minimum trace share for a terminal path to be reported.
    #[serde(default = "default_min_support")]
    pub min_support: f64,
    /// Chooses the factor preset applied in the queue-parameters table.
    #[serde(default = "default_include_customer")]
    pub include_customer: bool,
    /// Not echoed into the report: the report already sits in this
    /// directory, and embedding it would make otherwise identical runs
    /// differ byte-wise.
    #[serde(skip_serializing, default)]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    /// Derive report timestamps from log content so reruns are
    /// byte-identical.
    #[serde(default)]
    pub reproducible: bool,
    #[serde(default = "default_before_label")]
    pub before_era_label: String,
    #[serde(default = "default_after_label")]
    pub after_era_label: String,
}

impl AnalysisConfig {
    /// Checks field invariants. Runs before any file is opened, so a
    /// bad alpha fails fast even when the paths are wrong too.
    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(PipelineError::Config(format!(
                "alpha must lie strictly between 0 and 1, got {}",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.min_support) {
            return Err(PipelineError::Config(format!(
                "min_support must lie in [0, 1], got {}",
                self.min_support
            )));
        }
        if let Some(kappa) = self.kappa {
            if !(0.0..=1.0).contains(&kappa) {
                return Err(PipelineError::Config(format!(
                    "kappa must lie in [0, 1], got {kappa}"
                )));
            }
        }
        if self.automated_task.is_empty() {
            return Err(PipelineError::Config(
                "automated_task must name an activity".to_string(),
            ));
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(PipelineError::Config(
                "output_dir must name a directory".to_string(),
            ));
        }
        if self.before_era_label.is_empty()
            || self.after_era_label.is_empty()
            || self.before_era_label == self.after_era_label
        {
            return Err(PipelineError::Config(format!(
                "era labels must be distinct and non-empty, got {:?} and {:?}",
                self.before_era_label, self.after_era_label
            )));
        }
        Ok(())
    }

    /// The before-era activity the intervention removes.
    pub fn replaced_task_name(&self) -> &str {
        self.replaced_task.as_deref().unwrap_or(&self.automated_task)
    }
}

/// Loads an analysis config file.
pub fn load_analysis_config(path: &std::path::Path) -> Result<AnalysisConfig, PipelineError> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|err| PipelineError::Config(err.to_string()))
}

/// Pipeline failure with the stage that produced it.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("ingest ({era}): {source}")]
    Ingest {
        era: String,
        #[source]
        source: IngestError,
    },
    #[error("discovery: {0}")]
    Discovery(#[from] DiscoveryError),
    #[error("labour: {0}")]
    Labour(#[from] LabourError),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("queue: {0}")]
    Queue(#[from] QueueError),
    #[error("output schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PipelineError {
    /// Process exit code for the CLI: 2 rejected input, 3 bad data,
    /// 4 broken internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Ingest { .. }
            | PipelineError::Discovery(_)
            | PipelineError::Labour(_)
            | PipelineError::Model(_)
            | PipelineError::Queue(_)
            | PipelineError::Io(_) => 3,
            PipelineError::Schema(_) => 4,
        }
    }
}
