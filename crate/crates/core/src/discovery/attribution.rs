//! Assigns wall-clock time to individual events.
//!
//! The rule: an event owns the gap from the previous event's timestamp to
//! its own; the first event owns nothing. When a `start`/`complete` pair
//! exists for the same activity, the `complete` owns the pair's span
//! instead, while the `start` keeps the idle gap leading up to it. For
//! complete-only logs and for paired logs without overlapping work, the
//! attributed seconds of a trace sum exactly to its span.

use std::collections::HashMap;

use crate::eventlog::{Lifecycle, Trace};

/// Seconds attributed to each event, indexed like `trace.events`.
pub fn attributed_seconds(trace: &Trace) -> Vec<f64> {
    let events = &trace.events;
    let mut attributed = vec![0.0; events.len()];
    for i in 1..events.len() {
        attributed[i] =
            (events[i].timestamp - events[i - 1].timestamp).num_milliseconds() as f64 / 1000.0;
    }

    // start/complete pairing: a complete consumes the most recent unmatched
    // start of the same activity
    let mut open: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, event) in events.iter().enumerate() {
        match event.lifecycle {
            Lifecycle::Start => open.entry(event.activity.as_str()).or_default().push(i),
            Lifecycle::Complete => {
                if let Some(start) = open
                    .get_mut(event.activity.as_str())
                    .and_then(|stack| stack.pop())
                {
                    attributed[i] = (events[i].timestamp - events[start].timestamp)
                        .num_milliseconds() as f64
                        / 1000.0;
                }
            }
            _ => {}
        }
    }
    attributed
}
