//! Queue parameter estimation from an event log.
//!
//! Arrival rate comes from completion timestamps of the activity across
//! the whole log: with n completions spanning a window, the mean
//! inter-arrival time telescopes to window/(n-1). Service rate is the
//! reciprocal of the mean attributed duration of those completions.

use crate::discovery::attributed_seconds;
use crate::eventlog::{EventLog, Lifecycle};
use crate::labour::{ActivityClassification, ClassMatcher, LabourClass};

use super::{QueueError, QueueSystem, StationKind};

/// Maps a labour class to the kind of server it staffs.
///
/// Customer activities are not servers of the firm's process, so they
/// map to `None`.
pub fn station_kind(class: LabourClass) -> Option<StationKind> {
    match class {
        LabourClass::LowSkilled => Some(StationKind::LowSkilled),
        LabourClass::HighSkilled => Some(StationKind::HighSkilled),
        LabourClass::Automated => Some(StationKind::Automated),
        LabourClass::Customer => None,
    }
}

/// Estimates (lambda, mu) for one activity from its completions.
///
/// The classification gates what counts as a server: customer
/// activities have no firm-side queue and are rejected.
pub fn estimate_queue_params(
    log: &EventLog,
    activity: &str,
    classification: &ActivityClassification,
) -> Result<(f64, f64), QueueError> {
    let station = estimate_station(log, activity, classification)?;
    Ok((station.lambda, station.mu))
}

/// Estimates a full station for one activity.
pub fn estimate_station(
    log: &EventLog,
    activity: &str,
    classification: &ActivityClassification,
) -> Result<QueueSystem, QueueError> {
    let matcher = ClassMatcher::new(classification);
    let class = matcher.classify(activity);
    let kind = station_kind(class).ok_or_else(|| QueueError::NotAServer {
        activity: activity.to_string(),
    })?;

    let mut completions: Vec<f64> = Vec::new();
    let mut service_sum = 0.0;

    for trace in &log.traces {
        let attributed = attributed_seconds(trace);
        for (event, seconds) in trace.events.iter().zip(attributed) {
            if event.activity == activity && event.lifecycle == Lifecycle::Complete {
                completions.push(event.timestamp.timestamp_millis() as f64 / 1000.0);
                service_sum += seconds;
            }
        }
    }

    let n = completions.len();
    if n < 2 {
        return Err(QueueError::InsufficientObservations {
            activity: activity.to_string(),
            observed: n,
            needed: 2,
        });
    }

    completions.sort_by(|a, b| a.partial_cmp(b).expect("timestamps are finite"));
    let window = completions[n - 1] - completions[0];
    if window <= 0.0 {
        return Err(QueueError::DegenerateObservations {
            activity: activity.to_string(),
            what: "inter-arrival time",
        });
    }
    let mean_service = service_sum / n as f64;
    if mean_service <= 0.0 {
        return Err(QueueError::DegenerateObservations {
            activity: activity.to_string(),
            what: "service time",
        });
    }

    let lambda = (n - 1) as f64 / window;
    let mu = 1.0 / mean_service;
    Ok(QueueSystem::new(activity, kind, lambda, mu))
}
