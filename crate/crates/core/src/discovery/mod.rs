//! Control-flow discovery: directly-follows graphs, dominant terminal
//! paths, and per-path duration statistics.

mod attribution;
mod dfg;
mod durations;
mod paths;

pub use attribution::attributed_seconds;
pub use dfg::{build_dfg, DfgEdge, DfgExport, DirectlyFollowsGraph, TerminalPair};
pub use durations::{path_durations, PathDurations};
pub use paths::{classify_trace, extract_terminal_paths, path_name, PathSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error("event log has no traces")]
    EmptyLog,
    #[error("two path specs share the terminal pair ({initial:?}, {last:?})")]
    AmbiguousPathSpecs { initial: String, last: String },
    #[error("no traces match path {path:?}")]
    NoTracesOnPath { path: String },
}
