//! Event log model shared by every analysis stage.
//!
//! Logs come from IEEE XES XML or delimited text files. Parsing normalizes
//! timestamps to UTC and sorts each trace by timestamp (ties keep source
//! order) so downstream modules never see unordered events.

mod csv;
mod io;
mod validate;
mod xes;

pub use csv::{parse_csv, ColumnMap};
pub use io::read_log_file;
pub use validate::{validate_log, ValidationFinding, ValidationReport};
pub use xes::parse_xes;

use std::collections::BTreeMap;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Stage of an activity instance as declared by the log.
///
/// Only `start`/`complete` pairs influence duration attribution; everything
/// else is kept verbatim so validation can report unexpected values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum Lifecycle {
    Schedule,
    Start,
    Complete,
    Other(String),
}

impl Lifecycle {
    /// Case-insensitive mapping of the raw transition string.
    pub fn parse(raw: &str) -> Lifecycle {
        match raw.to_ascii_lowercase().as_str() {
            "schedule" => Lifecycle::Schedule,
            "start" => Lifecycle::Start,
            "complete" => Lifecycle::Complete,
            _ => Lifecycle::Other(raw.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Lifecycle::Schedule => "schedule",
            Lifecycle::Start => "start",
            Lifecycle::Complete => "complete",
            Lifecycle::Other(raw) => raw,
        }
    }
}

impl From<String> for Lifecycle {
    fn from(raw: String) -> Self {
        Lifecycle::parse(&raw)
    }
}

impl From<Lifecycle> for String {
    fn from(lc: Lifecycle) -> Self {
        lc.as_str().to_string()
    }
}

impl fmt::Display for Lifecycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One recorded step of one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub case_id: String,
    pub activity: String,
    /// Normalized to UTC at parse time.
    pub timestamp: DateTime<Utc>,
    pub resource: Option<String>,
    pub lifecycle: Lifecycle,
    /// Position within the trace as read from the source, before sorting.
    pub source_index: usize,
    /// Attributes the model does not interpret, preserved as raw strings.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

/// All events of one case, sorted by timestamp (source order breaks ties).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub case_id: String,
    pub events: Vec<Event>,
}

impl Trace {
    /// Builds a trace, sorting events into canonical order.
    pub fn new(case_id: String, mut events: Vec<Event>) -> Trace {
        events.sort_by(|a, b| {
            a.timestamp
                .cmp(&b.timestamp)
                .then(a.source_index.cmp(&b.source_index))
        });
        Trace { case_id, events }
    }

    /// Wall-clock span from first to last event, in seconds.
    pub fn span_seconds(&self) -> f64 {
        match (self.events.first(), self.events.last()) {
            (Some(first), Some(last)) => {
                (last.timestamp - first.timestamp).num_milliseconds() as f64 / 1000.0
            }
            _ => 0.0,
        }
    }
}

/// A parsed event log for one era (one source file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventLog {
    /// Which observation period this log covers, e.g. "2012" or "before".
    pub era_label: String,
    pub traces: Vec<Trace>,
    /// Source facts worth carrying along: file name, declared XES version,
    /// lenient-mode skip counts.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub source_meta: BTreeMap<String, String>,
}

impl EventLog {
    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn event_count(&self) -> usize {
        self.traces.iter().map(|t| t.events.len()).sum()
    }
}

/// Parse-time options shared by both input formats.
#[derive(Debug, Clone)]
pub struct IngestOptions {
    /// Label stamped onto the resulting log.
    pub era_label: String,
    /// Skip events/traces with missing required attributes instead of
    /// failing; skips are counted in `source_meta`.
    pub lenient: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            era_label: "unlabeled".to_string(),
            lenient: false,
        }
    }
}

/// Where in the source a problem was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourcePosition {
    /// 1-based data row of a delimited file (header excluded).
    Row(usize),
    /// 0-based trace and event indices of an XES file.
    Event { trace_index: usize, event_index: usize },
}

impl fmt::Display for SourcePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourcePosition::Row(row) => write!(f, "row {row}"),
            SourcePosition::Event {
                trace_index,
                event_index,
            } => write!(f, "trace {trace_index} event {event_index}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed xml near byte {position}: {detail}")]
    MalformedXml { position: u64, detail: String },
    #[error("{position}: missing required attribute {attribute}")]
    MissingRequiredAttribute {
        position: SourcePosition,
        attribute: &'static str,
    },
    #[error("trace {trace_index}: missing case identifier (concept:name)")]
    MissingCaseId { trace_index: usize },
    #[error("{position}: cannot parse timestamp {value:?}")]
    UnparseableTimestamp {
        position: SourcePosition,
        value: String,
    },
    #[error("required column {0:?} not present in header")]
    MissingColumn(String),
    #[error("cannot tell the format of {0:?} from its extension")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Accepts RFC 3339 (`2012-01-01T00:00:00.000+01:00`) plus the common
/// variant without a colon in the offset. A timezone is required.
pub(crate) fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    if let Ok(ts) = DateTime::parse_from_rfc3339(raw) {
        return Some(ts.with_timezone(&Utc));
    }
    DateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S%.f%z")
        .ok()
        .map(|ts| ts.with_timezone(&Utc))
}
