//! Directly-follows graph construction and export.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::DiscoveryError;
use crate::eventlog::EventLog;

/// Activity-level adjacency counts over an event log.
///
/// `terminal_pairs` counts traces by their (first, last) activity pair;
/// the per-side `start_activities`/`end_activities` maps are the marginals
/// of that distribution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DirectlyFollowsGraph {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeMap<(String, String), u64>,
    pub start_activities: BTreeMap<String, u64>,
    pub end_activities: BTreeMap<String, u64>,
    pub terminal_pairs: BTreeMap<(String, String), u64>,
    pub trace_count: u64,
}

/// Counts every consecutive event pair of every trace.
pub fn build_dfg(log: &EventLog) -> Result<DirectlyFollowsGraph, DiscoveryError> {
    if log.traces.is_empty() {
        return Err(DiscoveryError::EmptyLog);
    }
    let mut dfg = DirectlyFollowsGraph::default();
    for trace in &log.traces {
        let mut previous: Option<&str> = None;
        for event in &trace.events {
            dfg.nodes.insert(event.activity.clone());
            if let Some(prev) = previous {
                *dfg.edges
                    .entry((prev.to_string(), event.activity.clone()))
                    .or_default() += 1;
            } else {
                *dfg.start_activities
                    .entry(event.activity.clone())
                    .or_default() += 1;
            }
            previous = Some(event.activity.as_str());
        }
        if let (Some(first), Some(last)) = (trace.events.first(), trace.events.last()) {
            *dfg.end_activities.entry(last.activity.clone()).or_default() += 1;
            *dfg.terminal_pairs
                .entry((first.activity.clone(), last.activity.clone()))
                .or_default() += 1;
            dfg.trace_count += 1;
        }
    }
    Ok(dfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct DfgEdge {
    pub from: String,
    pub to: String,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TerminalPair {
    pub initial_activity: String,
    pub final_activity: String,
    pub traces: u64,
}

/// JSON-friendly adjacency form of a [`DirectlyFollowsGraph`].
#[derive(Debug, Clone, Serialize)]
pub struct DfgExport {
    pub trace_count: u64,
    pub nodes: Vec<String>,
    pub edges: Vec<DfgEdge>,
    pub start_activities: BTreeMap<String, u64>,
    pub end_activities: BTreeMap<String, u64>,
    pub terminal_pairs: Vec<TerminalPair>,
}

impl DirectlyFollowsGraph {
    pub fn to_export(&self) -> DfgExport {
        DfgExport {
            trace_count: self.trace_count,
            nodes: self.nodes.iter().cloned().collect(),
            edges: self
                .edges
                .iter()
                .map(|((from, to), count)| DfgEdge {
                    from: from.clone(),
                    to: to.clone(),
                    count: *count,
                })
                .collect(),
            start_activities: self.start_activities.clone(),
            end_activities: self.end_activities.clone(),
            terminal_pairs: self
                .terminal_pairs
                .iter()
                .map(|((initial, last), traces)| TerminalPair {
                    initial_activity: initial.clone(),
                    final_activity: last.clone(),
                    traces: *traces,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_export()).expect("dfg export serializes")
    }

    /// Graphviz rendering with edge frequencies as labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfg {\n  rankdir=LR;\n  node [shape=box];\n");
        for node in &self.nodes {
            out.push_str(&format!("  {};\n", quote(node)));
        }
        for ((from, to), count) in &self.edges {
            out.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                quote(from),
                quote(to),
                count
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}
