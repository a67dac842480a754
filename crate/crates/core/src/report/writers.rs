//! Report serialization. `report.json` always carries the full report;
//! the individual tables are emitted as JSON or CSV per the config.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{AnalysisConfig, OutputFormat, PipelineError, Report};

/// Writes every report file and returns their paths.
pub fn write_report(
    report: &Report,
    config: &AnalysisConfig,
) -> Result<Vec<PathBuf>, PipelineError> {
    let dir = &config.output_dir;
    fs::create_dir_all(dir)?;
    let mut written = vec![write_json(dir, "report", report)?];

    written.push(write_table(
        dir,
        "metrics_with_customer",
        config.format,
        &report.metrics_with_customer,
    )?);
    written.push(write_table(
        dir,
        "metrics_without_customer",
        config.format,
        &report.metrics_without_customer,
    )?);
    written.push(write_table(
        dir,
        "queue_parameters",
        config.format,
        &report.queue_params,
    )?);

    for pair in &report.labour {
        let suffix = if pair.customer_time_included {
            "with"
        } else {
            "without"
        };
        let stem = format!("labour_path_{}_{}", pair.path, suffix);
        let path = match config.format {
            OutputFormat::Json => write_json(dir, &stem, pair)?,
            // CSV is row-shaped: one composition row per era
            OutputFormat::Csv => write_csv(dir, &stem, &[&pair.before, &pair.after])?,
        };
        written.push(path);
    }

    Ok(written)
}

fn write_table<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: OutputFormat,
    rows: &[T],
) -> Result<PathBuf, PipelineError> {
    match format {
        OutputFormat::Json => write_json(dir, stem, rows),
        OutputFormat::Csv => {
            let refs: Vec<&T> = rows.iter().collect();
            write_csv(dir, stem, &refs)
        }
    }
}

fn write_json<T: Serialize + ?Sized>(
    dir: &Path,
    stem: &str,
    value: &T,
) -> Result<PathBuf, PipelineError> {
    let path = dir.join(format!("{stem}.json"));
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|err| PipelineError::Schema(format!("{stem}: {err}")))?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn write_csv<T: Serialize>(dir: &Path, stem: &str, rows: &[&T]) -> Result<PathBuf, PipelineError> {
    let path = dir.join(format!("{stem}.csv"));
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|err| PipelineError::Schema(format!("{stem}: {err}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|err| PipelineError::Schema(format!("{stem}: {err}")))?;
    fs::write(&path, bytes)?;
    Ok(path)
}
