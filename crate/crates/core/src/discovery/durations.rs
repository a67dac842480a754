//! Mean case durations per path, with and without customer-owned time.

use serde::{Deserialize, Serialize};

use super::{attributed_seconds, DiscoveryError, PathSpec};
use crate::eventlog::EventLog;
use crate::labour::{ActivityClassification, ClassMatcher, LabourClass};

/// Mean durations over the traces of one path in one era.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDurations {
    pub path: String,
    pub era: String,
    pub trace_count: u64,
    /// Mean first-to-last span.
    pub mean_total_seconds: f64,
    /// Mean span minus the seconds attributed to customer-class events.
    pub mean_firm_seconds: f64,
}

/// Measures one path. Firm time subtracts attributed customer seconds from
/// each trace's span rather than re-splicing timestamps, so per trace the
/// parts always add back up to the span.
pub fn path_durations(
    log: &EventLog,
    spec: &PathSpec,
    classification: &ActivityClassification,
) -> Result<PathDurations, DiscoveryError> {
    let matcher = ClassMatcher::new(classification);

    let mut matched = 0u64;
    let mut total = 0.0;
    let mut firm = 0.0;

    for trace in &log.traces {
        let (Some(first), Some(last)) = (trace.events.first(), trace.events.last()) else {
            continue;
        };
        if first.activity != spec.initial_activity || last.activity != spec.final_activity {
            continue;
        }
        matched += 1;

        let span = trace.span_seconds();
        let customer: f64 = trace
            .events
            .iter()
            .zip(attributed_seconds(trace))
            .filter(|(event, _)| matcher.classify(&event.activity) == LabourClass::Customer)
            .map(|(_, secs)| secs)
            .sum();
        total += span;
        // interleaved start/complete pairs can attribute more than the span;
        // firm time still never goes negative
        firm += (span - customer).max(0.0);
    }

    if matched == 0 {
        return Err(DiscoveryError::NoTracesOnPath {
            path: spec.name.clone(),
        });
    }

    let n = matched as f64;
    Ok(PathDurations {
        path: spec.name.clone(),
        era: log.era_label.clone(),
        trace_count: matched,
        mean_total_seconds: total / n,
        mean_firm_seconds: firm / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eventlog::{Event, Lifecycle, Trace};
    use crate::labour::ClassRule;
    use chrono::{TimeZone, Utc};
    use std::collections::BTreeMap;

    fn classification() -> ActivityClassification {
        ActivityClassification {
            version: 1,
            default_class: LabourClass::LowSkilled,
            rules: vec![ClassRule {
                pattern: "respond*".to_string(),
                class: LabourClass::Customer,
            }],
        }
    }

    fn trace(case: &str, steps: &[(&str, i64)]) -> Trace {
        let events = steps
            .iter()
            .enumerate()
            .map(|(i, (activity, secs))| Event {
                case_id: case.to_string(),
                activity: activity.to_string(),
                timestamp: Utc.timestamp_opt(*secs, 0).unwrap(),
                resource: None,
                lifecycle: Lifecycle::Complete,
                source_index: i,
                extra: BTreeMap::new(),
            })
            .collect();
        Trace::new(case.to_string(), events)
    }

    fn log(traces: Vec<Trace>) -> EventLog {
        EventLog {
            era_label: "before".to_string(),
            traces,
            source_meta: BTreeMap::new(),
        }
    }

    fn spec() -> PathSpec {
        PathSpec {
            name: "A".to_string(),
            initial_activity: "submit".to_string(),
            final_activity: "close".to_string(),
            trace_share: 1.0,
        }
    }

    #[test]
    fn means_match_a_flat_recomputation() {
        let l = log(vec![
            trace("c1", &[("submit", 0), ("respond", 600), ("close", 1000)]),
            trace("c2", &[("submit", 0), ("respond", 1200), ("close", 1400)]),
        ]);
        let d = path_durations(&l, &spec(), &classification()).unwrap();
        assert_eq!(d.trace_count, 2);
        // spans: 1000, 1400; customer seconds: 600, 1200
        assert_eq!(d.mean_total_seconds, 1200.0);
        assert_eq!(d.mean_firm_seconds, 300.0);
    }

    #[test]
    fn firm_equals_total_without_customer_activities() {
        let l = log(vec![trace("c1", &[("submit", 0), ("close", 500)])]);
        let d = path_durations(&l, &spec(), &classification()).unwrap();
        assert_eq!(d.mean_total_seconds, d.mean_firm_seconds);
    }

    #[test]
    fn only_matching_traces_count() {
        let l = log(vec![
            trace("c1", &[("submit", 0), ("close", 500)]),
            trace("c2", &[("submit", 0), ("abort", 9000)]),
        ]);
        let d = path_durations(&l, &spec(), &classification()).unwrap();
        assert_eq!(d.trace_count, 1);
        assert_eq!(d.mean_total_seconds, 500.0);
    }

    #[test]
    fn missing_path_is_an_error() {
        let l = log(vec![trace("c1", &[("submit", 0), ("abort", 100)])]);
        assert!(matches!(
            path_durations(&l, &spec(), &classification()),
            Err(DiscoveryError::NoTracesOnPath { .. })
        ));
    }
}
