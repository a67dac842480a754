//! Terminal-path extraction and trace classification.
//!
//! A "path" here is a family of traces sharing first and last activity.
//! Paths get short stable names (A, B, C, ...) in descending order of
//! trace share so results from two eras of the same process line up even
//! when the underlying activity labels were renamed.

use serde::{Deserialize, Serialize};

use super::{DirectlyFollowsGraph, DiscoveryError};
use crate::eventlog::Trace;

/// A dominant start/end pair with its share of all traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub name: String,
    pub initial_activity: String,
    pub final_activity: String,
    /// Fraction of all traces whose terminals match, in [0, 1].
    pub trace_share: f64,
}

/// Spreadsheet-style name for the path at `index`: A..Z, then AA, AB, ...
pub fn path_name(index: usize) -> String {
    let mut n = index + 1;
    let mut name = String::new();
    while n > 0 {
        let rem = (n - 1) % 26;
        name.insert(0, (b'A' + rem as u8) as char);
        n = (n - 1) / 26;
    }
    name
}

/// Returns the terminal pairs covering at least `min_support` of traces,
/// named in descending share order. Ties break on activity names so the
/// result is deterministic.
pub fn extract_terminal_paths(dfg: &DirectlyFollowsGraph, min_support: f64) -> Vec<PathSpec> {
    if dfg.trace_count == 0 {
        return Vec::new();
    }
    let total = dfg.trace_count as f64;
    let mut pairs: Vec<(&(String, String), u64)> = dfg
        .terminal_pairs
        .iter()
        .map(|(pair, count)| (pair, *count))
        .filter(|(_, count)| *count as f64 / total >= min_support)
        .collect();
    pairs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

    pairs
        .into_iter()
        .enumerate()
        .map(|(index, ((initial, last), count))| PathSpec {
            name: path_name(index),
            initial_activity: initial.clone(),
            final_activity: last.clone(),
            trace_share: count as f64 / total,
        })
        .collect()
}

/// Finds the path whose terminals match the trace, if any.
///
/// Fails when two specs claim the same terminal pair, since the answer
/// would depend on spec order.
pub fn classify_trace<'a>(
    trace: &Trace,
    specs: &'a [PathSpec],
) -> Result<Option<&'a PathSpec>, DiscoveryError> {
    for (i, a) in specs.iter().enumerate() {
        for b in &specs[i + 1..] {
            if a.initial_activity == b.initial_activity && a.final_activity == b.final_activity {
                return Err(DiscoveryError::AmbiguousPathSpecs {
                    initial: a.initial_activity.clone(),
                    last: a.final_activity.clone(),
                });
            }
        }
    }
    let (Some(first), Some(last)) = (trace.events.first(), trace.events.last()) else {
        return Ok(None);
    };
    Ok(specs
        .iter()
        .find(|spec| spec.initial_activity == first.activity && spec.final_activity == last.activity))
}
