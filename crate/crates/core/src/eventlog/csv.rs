//! Delimited-text fallback for logs that were exported from spreadsheets
//! rather than a process-mining tool.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{
    parse_timestamp, Event, EventLog, IngestError, IngestOptions, Lifecycle, SourcePosition, Trace,
};

/// Maps model fields to header names in the input file.
///
/// The three required columns must exist. Resource and lifecycle are used
/// when their column is present and silently left empty otherwise; columns
/// named by neither mapping are preserved in `Event::extra`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnMap {
    pub case_id: String,
    pub activity: String,
    pub timestamp: String,
    pub resource: Option<String>,
    pub lifecycle: Option<String>,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            case_id: "case_id".to_string(),
            activity: "activity".to_string(),
            timestamp: "timestamp".to_string(),
            resource: Some("resource".to_string()),
            lifecycle: Some("lifecycle".to_string()),
        }
    }
}

/// Parses a delimited file with a header row into an [`EventLog`].
///
/// Traces are grouped by the case column in first-seen order; events within
/// a trace end up sorted by timestamp exactly as with the XES reader.
pub fn parse_csv<R: Read>(
    reader: R,
    columns: &ColumnMap,
    opts: &IngestOptions,
) -> Result<EventLog, IngestError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);

    let headers = csv
        .headers()
        .map_err(|err| IngestError::Io(std::io::Error::other(err)))?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h == name);

    let case_col = find(&columns.case_id)
        .ok_or_else(|| IngestError::MissingColumn(columns.case_id.clone()))?;
    let activity_col = find(&columns.activity)
        .ok_or_else(|| IngestError::MissingColumn(columns.activity.clone()))?;
    let timestamp_col = find(&columns.timestamp)
        .ok_or_else(|| IngestError::MissingColumn(columns.timestamp.clone()))?;
    let resource_col = columns.resource.as_deref().and_then(find);
    let lifecycle_col = columns.lifecycle.as_deref().and_then(find);
    let mapped = [
        Some(case_col),
        Some(activity_col),
        Some(timestamp_col),
        resource_col,
        lifecycle_col,
    ];

    // case id -> position in `order`, keeps first-seen trace order
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, Vec<Event>> = BTreeMap::new();
    let mut skipped_rows = 0u64;

    for (row_index, record) in csv.records().enumerate() {
        let row = row_index + 1;
        let record = record.map_err(|err| IngestError::Io(std::io::Error::other(err)))?;
        let field = |col: usize| record.get(col).unwrap_or("").trim().to_string();

        let raw_ts = field(timestamp_col);
        let Some(timestamp) = parse_timestamp(&raw_ts) else {
            if opts.lenient {
                skipped_rows += 1;
                continue;
            }
            return Err(IngestError::UnparseableTimestamp {
                position: SourcePosition::Row(row),
                value: raw_ts,
            });
        };

        let mut extra = BTreeMap::new();
        for (col, header) in headers.iter().enumerate() {
            if !mapped.contains(&Some(col)) {
                extra.insert(header.to_string(), field(col));
            }
        }

        let case_id = field(case_col);
        let events = grouped.entry(case_id.clone()).or_insert_with(|| {
            order.push(case_id.clone());
            Vec::new()
        });
        events.push(Event {
            case_id,
            activity: field(activity_col),
            timestamp,
            resource: resource_col.map(field).filter(|r| !r.is_empty()),
            lifecycle: lifecycle_col
                .map(field)
                .filter(|l| !l.is_empty())
                .map(|l| Lifecycle::parse(&l))
                .unwrap_or(Lifecycle::Complete),
            source_index: events.len(),
            extra,
        });
    }

    let mut source_meta = BTreeMap::new();
    if skipped_rows > 0 {
        source_meta.insert("skipped_rows".to_string(), skipped_rows.to_string());
    }

    Ok(EventLog {
        era_label: opts.era_label.clone(),
        traces: order
            .into_iter()
            .map(|case_id| {
                let events = grouped.remove(&case_id).unwrap_or_default();
                Trace::new(case_id, events)
            })
            .collect(),
        source_meta,
    })
}
