//! Log lint: surfaces data-quality smells without failing the pipeline.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{EventLog, Lifecycle};

/// One data-quality observation. Findings never stop an analysis; they
/// exist so a surprising result can be traced back to its input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationFinding {
    /// The same case id appears on more than one trace.
    DuplicateCaseId { case_id: String },
    /// First and last event share a timestamp (includes single-event traces).
    ZeroDurationTrace { case_id: String },
    /// Source order disagreed with timestamp order before normalization.
    EventsOutOfOrder { case_id: String },
    /// A lifecycle string outside schedule/start/complete.
    UnknownLifecycle { case_id: String, value: String },
}

impl fmt::Display for ValidationFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFinding::DuplicateCaseId { case_id } => {
                write!(f, "duplicate case id {case_id:?}")
            }
            ValidationFinding::ZeroDurationTrace { case_id } => {
                write!(f, "trace {case_id:?} has zero duration")
            }
            ValidationFinding::EventsOutOfOrder { case_id } => {
                write!(f, "trace {case_id:?} was recorded out of timestamp order")
            }
            ValidationFinding::UnknownLifecycle { case_id, value } => {
                write!(f, "trace {case_id:?} uses unknown lifecycle {value:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<ValidationFinding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Lints a parsed log. Traces are inspected in log order, so the report is
/// deterministic for a given input.
pub fn validate_log(log: &EventLog) -> ValidationReport {
    let mut findings = Vec::new();

    let mut case_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for trace in &log.traces {
        *case_counts.entry(trace.case_id.as_str()).or_default() += 1;
    }
    for (case_id, count) in case_counts {
        if count > 1 {
            findings.push(ValidationFinding::DuplicateCaseId {
                case_id: case_id.to_string(),
            });
        }
    }

    for trace in &log.traces {
        if trace.span_seconds() == 0.0 {
            findings.push(ValidationFinding::ZeroDurationTrace {
                case_id: trace.case_id.clone(),
            });
        }
        // events are already time-sorted; a drop in source_index means the
        // file recorded them in a different order
        if trace
            .events
            .windows(2)
            .any(|w| w[0].source_index > w[1].source_index)
        {
            findings.push(ValidationFinding::EventsOutOfOrder {
                case_id: trace.case_id.clone(),
            });
        }
        if let Some(event) = trace
            .events
            .iter()
            .find(|e| matches!(e.lifecycle, Lifecycle::Other(_)))
        {
            findings.push(ValidationFinding::UnknownLifecycle {
                case_id: trace.case_id.clone(),
                value: event.lifecycle.as_str().to_string(),
            });
        }
    }

    ValidationReport { findings }
}
