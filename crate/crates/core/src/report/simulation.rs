//! Scenario runner with file output: baseline result, intervened
//! result, and a summary carrying the implied speed-up.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::queue::{load_scenario, run_scenario, QueueError, ScenarioOutcome, SimulationResult};

use super::PipelineError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ScenarioSummary {
    label: String,
    seed: u64,
    customers: u64,
    /// Baseline over intervened mean sojourn; > 1 is a speed-up.
    implied_delta_p: f64,
    baseline_total_mean_sojourn_seconds: f64,
    intervened_total_mean_sojourn_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationArtifacts {
    pub outcome: ScenarioOutcome,
    pub files: Vec<PathBuf>,
}

/// Loads and runs a scenario, writing its result files into
/// `output_dir`. Outputs carry no wall-clock data, so a fixed seed
/// reproduces them byte for byte.
pub fn run_simulation(
    scenario_path: &Path,
    output_dir: &Path,
) -> Result<SimulationArtifacts, PipelineError> {
    // everything a scenario run can trip over was written in the
    // scenario file, so it all counts as configuration rather than data
    let as_config_error = |err: QueueError| match err {
        QueueError::Config(msg) => PipelineError::Config(msg),
        QueueError::Io(io) => PipelineError::Io(io),
        other => PipelineError::Config(other.to_string()),
    };
    let config = load_scenario(scenario_path).map_err(as_config_error)?;
    let outcome = run_scenario(&config).map_err(as_config_error)?;
    fs::create_dir_all(output_dir)?;

    let mut files = Vec::new();
    files.push(write_json(
        output_dir,
        "scenario_baseline",
        &outcome.baseline,
    )?);
    files.push(write_json(
        output_dir,
        "scenario_intervened",
        &outcome.intervened,
    )?);
    files.push(write_json(
        output_dir,
        "scenario_summary",
        &ScenarioSummary {
            label: config.label.clone(),
            seed: config.seed,
            customers: config.customers,
            implied_delta_p: outcome.implied_delta_p,
            baseline_total_mean_sojourn_seconds: outcome.baseline.total_mean_sojourn_seconds,
            intervened_total_mean_sojourn_seconds: outcome.intervened.total_mean_sojourn_seconds,
        },
    )?);

    if config.record_sojourns {
        files.push(write_sojourns(
            output_dir,
            "sojourns_baseline",
            &outcome.baseline,
        )?);
        files.push(write_sojourns(
            output_dir,
            "sojourns_intervened",
            &outcome.intervened,
        )?);
    }

    Ok(SimulationArtifacts { outcome, files })
}

fn write_json<T: Serialize>(dir: &Path, stem: &str, value: &T) -> Result<PathBuf, PipelineError> {
    let path = dir.join(format!("{stem}.json"));
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|err| PipelineError::Schema(format!("{stem}: {err}")))?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn write_sojourns(
    dir: &Path,
    stem: &str,
    result: &SimulationResult,
) -> Result<PathBuf, PipelineError> {
    let series = result.per_customer_sojourns.as_deref().unwrap_or(&[]);
    let path = dir.join(format!("{stem}.csv"));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["customer", "sojourn_seconds"])
        .map_err(|err| PipelineError::Schema(format!("{stem}: {err}")))?;
    for (customer, sojourn) in series.iter().enumerate() {
        writer
            .write_record([customer.to_string(), format!("{sojourn:.6}")])
            .map_err(|err| PipelineError::Schema(format!("{stem}: {err}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|err| PipelineError::Schema(format!("{stem}: {err}")))?;
    fs::write(&path, bytes)?;
    Ok(path)
}
