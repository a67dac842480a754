//! Helpers shared by the integration tests.

// each test binary compiles this module separately and uses its own subset
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::{TimeZone, Utc};
use prodmine::eventlog::{Event, EventLog, Lifecycle, Trace};

/// Absolute path of a bundled fixture file.
pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

/// A complete-lifecycle event at an absolute second offset.
pub fn event(case: &str, activity: &str, at_seconds: i64, source_index: usize) -> Event {
    Event {
        case_id: case.to_string(),
        activity: activity.to_string(),
        timestamp: Utc.timestamp_opt(at_seconds, 0).unwrap(),
        resource: None,
        lifecycle: Lifecycle::Complete,
        source_index,
        extra: BTreeMap::new(),
    }
}

/// A trace from (activity, absolute seconds) pairs.
pub fn trace(case: &str, steps: &[(&str, i64)]) -> Trace {
    let events = steps
        .iter()
        .enumerate()
        .map(|(i, (activity, at))| event(case, activity, *at, i))
        .collect();
    Trace::new(case.to_string(), events)
}

/// A log from prebuilt traces.
pub fn log(era: &str, traces: Vec<Trace>) -> EventLog {
    EventLog {
        era_label: era.to_string(),
        traces,
        source_meta: BTreeMap::new(),
    }
}
