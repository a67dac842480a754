//! The analysis pipeline: two event logs in, one report out.

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::discovery::{
    attributed_seconds, build_dfg, extract_terminal_paths, path_durations, PathSpec,
};
use crate::eventlog::{read_log_file, EventLog, IngestOptions, Trace};
use crate::labour::{
    aggregate_labour, displacement, load_classification, ActivityClassification, ClassMatcher,
    LabourClass, LabourComposition,
};
use crate::model::{kappa_from_task, path_metrics, PathMetrics};
use crate::queue::{
    apply_intervention, estimate_station, InterventionFactors, QueueError, QueueNetwork,
    QueueSystem, StationKind,
};

use super::{write_report, AnalysisConfig, PipelineError};

/// A terminal path seen in only one era's log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EraOnlyPath {
    pub path: String,
    pub era: String,
    pub initial_activity: String,
    pub final_activity: String,
    pub trace_share: f64,
}

/// Labour composition of one path in both eras, under one customer-time
/// treatment. Displacement rates live on the after era when computable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabourPair {
    pub path: String,
    pub customer_time_included: bool,
    pub before: LabourComposition,
    pub after: LabourComposition,
}

/// Estimated rates for one station, next to the rates the intervention
/// factors imply for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueParamsRow {
    pub task_name: String,
    pub kind: StationKind,
    pub estimated_lambda: f64,
    pub estimated_mu: f64,
    pub derived_kind: Option<StationKind>,
    pub derived_lambda: Option<f64>,
    pub derived_mu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportProvenance {
    pub tool_version: String,
    /// RFC 3339; the newest event timestamp under `reproducible`,
    /// otherwise the wall clock.
    pub generated_at: String,
    pub before_log_sha256: String,
    pub after_log_sha256: String,
    pub classification_sha256: String,
    pub config: AnalysisConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metrics_with_customer: Vec<PathMetrics>,
    pub metrics_without_customer: Vec<PathMetrics>,
    pub labour: Vec<LabourPair>,
    pub queue_params: Vec<QueueParamsRow>,
    pub era_only_paths: Vec<EraOnlyPath>,
    pub warnings: Vec<String>,
    pub provenance: ReportProvenance,
}

/// Runs the whole pipeline and writes the report files into
/// `config.output_dir`.
pub fn run_analysis(config: &AnalysisConfig) -> Result<Report, PipelineError> {
    config.validate()?;
    let classification = load_classification(&config.classification_path)?;

    let before_opts = IngestOptions {
        era_label: config.before_era_label.clone(),
        lenient: false,
    };
    let after_opts = IngestOptions {
        era_label: config.after_era_label.clone(),
        lenient: false,
    };
    let (before, after) = rayon::join(
        || read_log_file(&config.before_log_path, &before_opts, None),
        || read_log_file(&config.after_log_path, &after_opts, None),
    );
    let before = before.map_err(|source| PipelineError::Ingest {
        era: config.before_era_label.clone(),
        source,
    })?;
    let after = after.map_err(|source| PipelineError::Ingest {
        era: config.after_era_label.clone(),
        source,
    })?;

    let paths_before = extract_terminal_paths(&build_dfg(&before)?, config.min_support);
    let paths_after = extract_terminal_paths(&build_dfg(&after)?, config.min_support);

    // paths are named by frequency rank within their era, and eras are
    // compared rank by rank; the unmatched tail of the longer list is
    // reported as era-only
    let shared = paths_before.len().min(paths_after.len());
    let mut era_only_paths = Vec::new();
    for spec in &paths_before[shared..] {
        era_only_paths.push(era_only(spec, &config.before_era_label));
    }
    for spec in &paths_after[shared..] {
        era_only_paths.push(era_only(spec, &config.after_era_label));
    }

    let mut warnings = Vec::new();
    let pairs: Vec<(&PathSpec, &PathSpec)> = paths_before[..shared]
        .iter()
        .zip(paths_after[..shared].iter())
        .collect();

    let per_path: Vec<Result<PathOutput, PipelineError>> = pairs
        .par_iter()
        .map(|(spec_before, spec_after)| {
            analyse_path(config, &classification, &before, &after, spec_before, spec_after)
        })
        .collect();

    let mut metrics_with_customer = Vec::new();
    let mut metrics_without_customer = Vec::new();
    let mut labour = Vec::new();
    for result in per_path {
        let output = result?;
        metrics_with_customer.push(output.with_customer);
        metrics_without_customer.push(output.without_customer);
        labour.extend(output.labour);
        warnings.extend(output.warnings);
    }

    let queue_params = queue_table(config, &classification, &before, &mut warnings)?;

    let provenance = ReportProvenance {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        generated_at: generated_at(config, &before, &after),
        before_log_sha256: file_sha256(&config.before_log_path)?,
        after_log_sha256: file_sha256(&config.after_log_path)?,
        classification_sha256: file_sha256(&config.classification_path)?,
        config: config.clone(),
    };

    let report = Report {
        metrics_with_customer,
        metrics_without_customer,
        labour,
        queue_params,
        era_only_paths,
        warnings,
        provenance,
    };
    write_report(&report, config)?;
    Ok(report)
}

struct PathOutput {
    with_customer: PathMetrics,
    without_customer: PathMetrics,
    labour: Vec<LabourPair>,
    warnings: Vec<String>,
}

fn analyse_path(
    config: &AnalysisConfig,
    classification: &ActivityClassification,
    before: &EventLog,
    after: &EventLog,
    spec_before: &PathSpec,
    spec_after: &PathSpec,
) -> Result<PathOutput, PipelineError> {
    let name = &spec_before.name;
    let durations_before = path_durations(before, spec_before, classification)?;
    let durations_after = path_durations(after, spec_after, classification)?;

    let kappa = match config.kappa {
        Some(kappa) => kappa,
        None => {
            let replaced = mean_task_seconds(before, spec_before, config.replaced_task_name());
            let automated = mean_task_seconds(after, spec_after, &config.automated_task);
            if replaced > 0.0 {
                kappa_from_task(replaced, automated)?
            } else {
                0.0
            }
        }
    };

    let with_customer = path_metrics(
        name,
        durations_before.mean_total_seconds,
        durations_after.mean_total_seconds,
        kappa,
    )?;
    let without_customer = path_metrics(
        name,
        durations_before.mean_firm_seconds,
        durations_after.mean_firm_seconds,
        kappa,
    )?;

    let mut warnings = Vec::new();
    let mut labour = Vec::new();
    for include_customer in [true, false] {
        let composition_before =
            aggregate_labour(before, spec_before, classification, include_customer)?;
        let mut composition_after =
            aggregate_labour(after, spec_after, classification, include_customer)?;
        match displacement(&composition_before, &composition_after) {
            Ok((substitution, redundancy)) => {
                composition_after.substitution_rate = Some(substitution);
                composition_after.redundancy_share = Some(redundancy);
            }
            Err(err) => warnings.push(format!(
                "path {name}: displacement left blank ({err})"
            )),
        }
        labour.push(LabourPair {
            path: name.clone(),
            customer_time_included: include_customer,
            before: composition_before,
            after: composition_after,
        });
    }

    Ok(PathOutput {
        with_customer,
        without_customer,
        labour,
        warnings,
    })
}

/// Mean attributed seconds of one activity per trace on the path.
fn mean_task_seconds(log: &EventLog, spec: &PathSpec, task: &str) -> f64 {
    let mut total = 0.0;
    let mut traces = 0u64;
    for trace in &log.traces {
        if !on_path(trace, spec) {
            continue;
        }
        traces += 1;
        let attributed = attributed_seconds(trace);
        for (event, seconds) in trace.events.iter().zip(attributed) {
            if event.activity == task {
                total += seconds;
            }
        }
    }
    if traces == 0 {
        0.0
    } else {
        total / traces as f64
    }
}

fn on_path(trace: &Trace, spec: &PathSpec) -> bool {
    match (trace.events.first(), trace.events.last()) {
        (Some(first), Some(last)) => {
            first.activity == spec.initial_activity && last.activity == spec.final_activity
        }
        _ => false,
    }
}

fn era_only(spec: &PathSpec, era: &str) -> EraOnlyPath {
    EraOnlyPath {
        path: spec.name.clone(),
        era: era.to_string(),
        initial_activity: spec.initial_activity.clone(),
        final_activity: spec.final_activity.clone(),
        trace_share: spec.trace_share,
    }
}

fn queue_table(
    config: &AnalysisConfig,
    classification: &ActivityClassification,
    before: &EventLog,
    warnings: &mut Vec<String>,
) -> Result<Vec<QueueParamsRow>, PipelineError> {
    let matcher = ClassMatcher::new(classification);
    let activities: BTreeSet<&str> = before
        .traces
        .iter()
        .flat_map(|t| t.events.iter().map(|e| e.activity.as_str()))
        .collect();

    let mut stations: Vec<QueueSystem> = Vec::new();
    for activity in activities {
        if matcher.classify(activity) == LabourClass::Customer {
            continue;
        }
        match estimate_station(before, activity, classification) {
            Ok(station) => stations.push(station),
            Err(
                err @ (QueueError::InsufficientObservations { .. }
                | QueueError::DegenerateObservations { .. }),
            ) => {
                warnings.push(format!("queue: {err}"));
            }
            Err(err) => return Err(err.into()),
        }
    }

    let factors = if config.include_customer {
        InterventionFactors::recommended_with_customer()
    } else {
        InterventionFactors::recommended_without_customer()
    };
    let network = QueueNetwork {
        label: config.before_era_label.clone(),
        stations,
    };

    let derived = match apply_intervention(&network, config.replaced_task_name(), &factors) {
        Ok(intervened) => Some(intervened),
        Err(QueueError::UnknownTask(task)) => {
            warnings.push(format!(
                "queue: task {task:?} not observed in the before era; \
                 factor-derived rates left blank"
            ));
            None
        }
        Err(err) => return Err(err.into()),
    };

    Ok(network
        .stations
        .iter()
        .enumerate()
        .map(|(i, station)| {
            let twin = derived.as_ref().map(|net| &net.stations[i]);
            QueueParamsRow {
                task_name: station.task_name.clone(),
                kind: station.kind,
                estimated_lambda: station.lambda,
                estimated_mu: station.mu,
                derived_kind: twin.map(|s| s.kind),
                derived_lambda: twin.map(|s| s.lambda),
                derived_mu: twin.map(|s| s.mu),
            }
        })
        .collect())
}

fn generated_at(config: &AnalysisConfig, before: &EventLog, after: &EventLog) -> String {
    if config.reproducible {
        let newest = before
            .traces
            .iter()
            .chain(after.traces.iter())
            .flat_map(|t| t.events.iter())
            .map(|e| e.timestamp)
            .max();
        match newest {
            Some(ts) => ts.to_rfc3339(),
            None => "1970-01-01T00:00:00+00:00".to_string(),
        }
    } else {
        chrono::Utc::now().to_rfc3339()
    }
}

fn file_sha256(path: &Path) -> Result<String, PipelineError> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}
