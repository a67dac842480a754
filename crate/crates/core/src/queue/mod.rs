//! Stochastic queue model of a process path.
//!
//! Each activity becomes a single-server FIFO station with exponential
//! arrivals and services; a path is a tandem chain of such stations.
//! Automation is an intervention that swaps one station for an automated
//! server and rescales the others.

mod analytic;
mod estimate;
mod intervene;
mod scenario;
mod sim;

pub use analytic::analytic_mm1;
pub use estimate::{estimate_queue_params, estimate_station, station_kind};
pub use intervene::apply_intervention;
pub use scenario::{
    load_scenario, parse_scenario, run_scenario, FactorsSpec, ScenarioConfig, ScenarioOutcome,
    SCENARIO_SCHEMA_VERSION,
};
pub use sim::{simulate, simulate_with, SimulationOptions, SimulationResult, StationStats};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Server archetype behind a station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationKind {
    LowSkilled,
    HighSkilled,
    Automated,
}

/// Queueing discipline. Only FIFO exists today; the enum keeps the config
/// format forward-compatible.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discipline {
    #[default]
    Fifo,
}

/// Service/arrival distribution hook; exponential is the only option.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    #[default]
    Exponential,
}

/// One task modeled as a single-server queue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueSystem {
    pub task_name: String,
    pub kind: StationKind,
    /// Mean arrivals per second.
    pub lambda: f64,
    /// Mean service completions per second while busy.
    pub mu: f64,
    #[serde(default)]
    pub discipline: Discipline,
    #[serde(default)]
    pub distribution: DistributionKind,
}

impl QueueSystem {
    pub fn new(task_name: impl Into<String>, kind: StationKind, lambda: f64, mu: f64) -> Self {
        QueueSystem {
            task_name: task_name.into(),
            kind,
            lambda,
            mu,
            discipline: Discipline::Fifo,
            distribution: DistributionKind::Exponential,
        }
    }

    /// Steady-state analytics exist only below saturation.
    pub fn is_stable(&self) -> bool {
        self.lambda < self.mu
    }
}

/// A path rendered as stations in activity order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueNetwork {
    /// Conventionally "path name + era", e.g. "A/2017".
    pub label: String,
    pub stations: Vec<QueueSystem>,
}

/// Rate changes modeling an automation intervention.
///
/// `l_*`/`h_*` are dimensionless multipliers applied to low-/high-skilled
/// stations; the automated station gets the absolute rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionFactors {
    pub l_lambda_factor: f64,
    pub l_mu_factor: f64,
    pub h_lambda_factor: f64,
    pub h_mu_factor: f64,
    /// Absolute arrival rate of the automated station, customers/second.
    pub automated_lambda: f64,
    /// Absolute service rate of the automated station, customers/second.
    pub automated_mu: f64,
}

impl InterventionFactors {
    /// Factor table fitted on processes where customer-owned time counts
    /// toward case time.
    pub fn recommended_with_customer() -> Self {
        InterventionFactors {
            l_lambda_factor: 2.29,
            l_mu_factor: 0.04,
            h_lambda_factor: 2.05,
            h_mu_factor: 2.11e-5,
            automated_lambda: 1.10,
            automated_mu: 1.29,
        }
    }

    /// Factor table fitted on firm-only time.
    pub fn recommended_without_customer() -> Self {
        InterventionFactors {
            l_lambda_factor: 2.29,
            l_mu_factor: 0.41,
            h_lambda_factor: 2.05,
            h_mu_factor: 0.02,
            automated_lambda: 1.10,
            automated_mu: 6.01,
        }
    }
}

#[derive(Debug, Error)]
pub enum QueueError {
    #[error("station {task_name:?} is unstable: lambda {lambda} >= mu {mu}")]
    Unstable {
        task_name: String,
        lambda: f64,
        mu: f64,
    },
    #[error("station {task_name:?} has a non-positive rate (lambda {lambda}, mu {mu})")]
    NonPositiveRate {
        task_name: String,
        lambda: f64,
        mu: f64,
    },
    #[error("no station named {0:?} in the network")]
    UnknownTask(String),
    #[error("activity {activity:?} occurs {observed} time(s); need at least {needed}")]
    InsufficientObservations {
        activity: String,
        observed: usize,
        needed: usize,
    },
    #[error("activity {activity:?}: mean {what} is zero, cannot derive a rate")]
    DegenerateObservations {
        activity: String,
        what: &'static str,
    },
    #[error("activity {activity:?} classifies as customer work, which is not served by a station")]
    NotAServer { activity: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
