//! Per-path labour composition.

use serde::{Deserialize, Serialize};

use super::{ActivityClassification, ClassMatcher, LabourClass, LabourError};
use crate::discovery::{attributed_seconds, PathSpec};
use crate::eventlog::{EventLog, Trace};

/// Mean attributed seconds per trace, split by labour class, for one path
/// in one era.
///
/// `automated_seconds` is `None` when no activity of the path classifies
/// as automated (a pre-automation era). The displacement fields are filled
/// by [`displacement`](super::displacement) when both eras are available;
/// they stay `None` on a before-era composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabourComposition {
    pub path: String,
    pub era: String,
    pub high_skilled_seconds: f64,
    pub low_skilled_seconds: f64,
    pub automated_seconds: Option<f64>,
    /// Human hours replaced per automated hour.
    pub substitution_rate: Option<f64>,
    /// Share of the baseline low-skilled hours no longer needed.
    pub redundancy_share: Option<f64>,
}

/// Sums attributed seconds by class over the traces of one path.
///
/// Customer-class seconds never count toward a labour class. With
/// `include_customer` set, attribution runs over the full trace and
/// customer seconds are simply dropped. Without it, customer-class events
/// are removed first and attribution reruns over the remainder, so waiting
/// time that used to sit with a customer event migrates to the next firm
/// event. The first form answers "what does the firm spend while the
/// customer participates", the second "what would the firm-only process
/// look like".
pub fn aggregate_labour(
    log: &EventLog,
    spec: &PathSpec,
    classification: &ActivityClassification,
    include_customer: bool,
) -> Result<LabourComposition, LabourError> {
    let matcher = ClassMatcher::new(classification);

    let mut matched = 0u64;
    let mut high = 0.0;
    let mut low = 0.0;
    let mut automated = 0.0;
    let mut saw_automated = false;

    for trace in &log.traces {
        let (Some(first), Some(last)) = (trace.events.first(), trace.events.last()) else {
            continue;
        };
        if first.activity != spec.initial_activity || last.activity != spec.final_activity {
            continue;
        }
        matched += 1;

        let filtered;
        let attributed_over = if include_customer {
            trace
        } else {
            filtered = Trace::new(
                trace.case_id.clone(),
                trace
                    .events
                    .iter()
                    .filter(|e| matcher.classify(&e.activity) != LabourClass::Customer)
                    .cloned()
                    .collect(),
            );
            &filtered
        };

        let seconds = attributed_seconds(attributed_over);
        for (event, secs) in attributed_over.events.iter().zip(seconds) {
            match matcher.classify(&event.activity) {
                LabourClass::HighSkilled => high += secs,
                LabourClass::LowSkilled => low += secs,
                LabourClass::Automated => {
                    automated += secs;
                    saw_automated = true;
                }
                LabourClass::Customer => {}
            }
        }
    }

    if matched == 0 {
        return Err(LabourError::NoTracesOnPath {
            path: spec.name.clone(),
        });
    }

    let n = matched as f64;
    Ok(LabourComposition {
        path: spec.name.clone(),
        era: log.era_label.clone(),
        high_skilled_seconds: high / n,
        low_skilled_seconds: low / n,
        automated_seconds: saw_automated.then_some(automated / n),
        substitution_rate: None,
        redundancy_share: None,
    })
}
