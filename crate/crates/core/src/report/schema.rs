//! A machine-readable description of every file the pipeline emits,
//! plus a validator used by the test suite and the CLI.
//!
//! JSON tables are arrays of objects (or one object for file kinds
//! marked `single`); CSV tables carry the same field names as columns.
//! Optional fields may be null or absent in JSON and empty in CSV.

use std::path::Path;

use serde_json::{json, Value};

use super::PipelineError;

pub const SCHEMA_VERSION: u32 = 1;

/// Field names that must be present for each file stem.
const TABLES: &[(&str, bool, &[&str])] = &[
    (
        "metrics_with_customer",
        false,
        &[
            "path",
            "tau_before_seconds",
            "tau_after_seconds",
            "delta_p",
            "kappa",
            "psi",
            "gamma",
            "theta",
            "regime",
        ],
    ),
    (
        "metrics_without_customer",
        false,
        &[
            "path",
            "tau_before_seconds",
            "tau_after_seconds",
            "delta_p",
            "kappa",
            "psi",
            "gamma",
            "theta",
            "regime",
        ],
    ),
    (
        "queue_parameters",
        false,
        &["task_name", "kind", "estimated_lambda", "estimated_mu"],
    ),
    (
        "report",
        true,
        &[
            "metrics_with_customer",
            "metrics_without_customer",
            "labour",
            "queue_params",
            "era_only_paths",
            "warnings",
            "provenance",
        ],
    ),
    (
        "scenario_baseline",
        true,
        &[
            "network_label",
            "seed",
            "rng_algorithm",
            "completed_customers",
            "warmup_customers",
            "per_station",
            "total_mean_sojourn_seconds",
            "warnings",
        ],
    ),
    (
        "scenario_intervened",
        true,
        &[
            "network_label",
            "seed",
            "rng_algorithm",
            "completed_customers",
            "warmup_customers",
            "per_station",
            "total_mean_sojourn_seconds",
            "warnings",
        ],
    ),
    (
        "scenario_summary",
        true,
        &[
            "label",
            "seed",
            "customers",
            "implied_delta_p",
            "baseline_total_mean_sojourn_seconds",
            "intervened_total_mean_sojourn_seconds",
        ],
    ),
    ("sojourns_baseline", false, &["customer", "sojourn_seconds"]),
    (
        "sojourns_intervened",
        false,
        &["customer", "sojourn_seconds"],
    ),
];

// labour files carry the path name in the stem, so they are matched by
// shape rather than listed in TABLES
const LABOUR_JSON_FIELDS: &[&str] = &["path", "customer_time_included", "before", "after"];
const LABOUR_CSV_FIELDS: &[&str] = &["path", "era", "high_skilled_seconds", "low_skilled_seconds"];

/// The shipped schema as one JSON document.
pub fn descriptor() -> Value {
    let mut tables = serde_json::Map::new();
    for (stem, single, fields) in TABLES {
        tables.insert(
            stem.to_string(),
            json!({ "single_object": single, "required_fields": fields }),
        );
    }
    tables.insert(
        "labour_path_<name>_<with|without>".to_string(),
        json!({
            "single_object": true,
            "required_fields": LABOUR_JSON_FIELDS,
            "csv_required_fields": LABOUR_CSV_FIELDS,
        }),
    );
    json!({ "schema_version": SCHEMA_VERSION, "tables": Value::Object(tables) })
}

/// Checks one emitted file against the schema. The stem decides which
/// table it is; unknown stems are an error.
pub fn validate_file(path: &Path) -> Result<(), PipelineError> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| schema_err(path, "file name is not valid UTF-8"))?;
    let extension = path.extension().and_then(|s| s.to_str()).unwrap_or("");

    let (single, json_fields, csv_fields): (bool, &[&str], &[&str]) =
        match TABLES.iter().find(|(name, _, _)| *name == stem) {
            Some((_, single, fields)) => (*single, fields, fields),
            None if is_labour_stem(stem) => (true, LABOUR_JSON_FIELDS, LABOUR_CSV_FIELDS),
            None => {
                return Err(schema_err(
                    path,
                    "not a file this pipeline is documented to emit",
                ))
            }
        };

    match extension {
        "json" => {
            let text = std::fs::read_to_string(path)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|err| schema_err(path, &format!("not valid JSON: {err}")))?;
            if single {
                require_fields(path, &value, json_fields)
            } else {
                let rows = value
                    .as_array()
                    .ok_or_else(|| schema_err(path, "expected a JSON array of rows"))?;
                for row in rows {
                    require_fields(path, row, json_fields)?;
                }
                Ok(())
            }
        }
        "csv" => {
            if std::fs::metadata(path)?.len() == 0 {
                // zero-row tables are written without a header
                return Ok(());
            }
            let mut reader = csv::Reader::from_path(path)
                .map_err(|err| schema_err(path, &format!("not readable as CSV: {err}")))?;
            let headers = reader
                .headers()
                .map_err(|err| schema_err(path, &format!("no CSV header: {err}")))?
                .clone();
            for field in csv_fields {
                if !headers.iter().any(|h| h == *field) {
                    return Err(schema_err(path, &format!("missing column {field:?}")));
                }
            }
            Ok(())
        }
        other => Err(schema_err(path, &format!("unexpected extension {other:?}"))),
    }
}

/// Validates every `.json`/`.csv` file in a report directory.
pub fn validate_output_dir(dir: &Path) -> Result<(), PipelineError> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)?
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| {
            matches!(
                p.extension().and_then(|s| s.to_str()),
                Some("json") | Some("csv")
            )
        })
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(schema_err(dir, "no report files found"));
    }
    for path in entries {
        validate_file(&path)?;
    }
    Ok(())
}

fn is_labour_stem(stem: &str) -> bool {
    stem.strip_prefix("labour_path_")
        .map(|rest| rest.ends_with("_with") || rest.ends_with("_without"))
        .unwrap_or(false)
}

fn require_fields(path: &Path, value: &Value, fields: &[&str]) -> Result<(), PipelineError> {
    let object = value
        .as_object()
        .ok_or_else(|| schema_err(path, "expected a JSON object"))?;
    for field in fields {
        if !object.contains_key(*field) {
            return Err(schema_err(path, &format!("missing field {field:?}")));
        }
    }
    Ok(())
}

fn schema_err(path: &Path, detail: &str) -> PipelineError {
    PipelineError::Schema(format!("{}: {detail}", path.display()))
}
