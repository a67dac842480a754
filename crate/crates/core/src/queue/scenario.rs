//! Scenario files: a network, an intervention, and a simulation budget.
//!
//! A scenario is a versioned TOML document. Factors may name a built-in
//! preset or spell out every value:
//!
//! ```toml
//! version = 1
//! label = "loan offers"
//! customers = 100000
//! seed = 7
//! automated_task = "validate"
//! factors = "without_customer"
//!
//! [[stations]]
//! task_name = "validate"
//! kind = "low_skilled"
//! lambda = 0.02
//! mu = 0.2
//! ```
//!
//! Running a scenario simulates the network as declared, applies the
//! intervention, simulates again with the same seed, and reports the
//! speed-up implied by the two mean sojourns.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    apply_intervention, simulate_with, InterventionFactors, QueueError, QueueNetwork,
    QueueSystem, SimulationOptions, SimulationResult,
};

pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

fn default_warmup() -> f64 {
    0.1
}

/// Intervention factors, either a named preset or explicit values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorsSpec {
    Preset(String),
    Explicit(InterventionFactors),
}

impl FactorsSpec {
    /// Resolves to concrete factors.
    ///
    /// Recognized presets: `with_customer`, `without_customer`.
    pub fn resolve(&self) -> Result<InterventionFactors, QueueError> {
        match self {
            FactorsSpec::Explicit(factors) => Ok(factors.clone()),
            FactorsSpec::Preset(name) => match name.as_str() {
                "with_customer" => Ok(InterventionFactors::recommended_with_customer()),
                "without_customer" => Ok(InterventionFactors::recommended_without_customer()),
                other => Err(QueueError::Config(format!(
                    "unknown factors preset {other:?}; expected \"with_customer\", \
                     \"without_customer\", or an explicit table"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub version: u32,
    pub label: String,
    pub customers: u64,
    pub seed: u64,
    #[serde(default = "default_warmup")]
    pub warmup_fraction: f64,
    /// Keep per-customer sojourns for CSV export.
    #[serde(default)]
    pub record_sojourns: bool,
    /// Station to automate in the intervened run.
    pub automated_task: String,
    pub factors: FactorsSpec,
    pub stations: Vec<QueueSystem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    pub baseline: SimulationResult,
    pub intervened: SimulationResult,
    /// Ratio of baseline to intervened mean sojourn; > 1 means the
    /// intervention sped the process up.
    pub implied_delta_p: f64,
}

/// Parses a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, QueueError> {
    let config: ScenarioConfig =
        toml::from_str(text).map_err(|err| QueueError::Config(err.to_string()))?;
    if config.version != SCENARIO_SCHEMA_VERSION {
        return Err(QueueError::Config(format!(
            "unsupported scenario version {} (this build reads version {})",
            config.version, SCENARIO_SCHEMA_VERSION
        )));
    }
    if config.stations.is_empty() {
        return Err(QueueError::Config(
            "scenario declares no stations".to_string(),
        ));
    }
    Ok(config)
}

/// Loads a scenario document from disk.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, QueueError> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

/// Runs the baseline and intervened simulations for a scenario.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutcome, QueueError> {
    let factors = config.factors.resolve()?;
    let network = QueueNetwork {
        label: config.label.clone(),
        stations: config.stations.clone(),
    };
    let options = SimulationOptions {
        warmup_fraction: config.warmup_fraction,
        record_sojourns: config.record_sojourns,
    };

    let baseline = simulate_with(&network, config.customers, config.seed, &options)?;
    let intervened_network = apply_intervention(&network, &config.automated_task, &factors)?;
    let intervened = simulate_with(&intervened_network, config.customers, config.seed, &options)?;

    let implied_delta_p =
        baseline.total_mean_sojourn_seconds / intervened.total_mean_sojourn_seconds;
    Ok(ScenarioOutcome {
        baseline,
        intervened,
        implied_delta_p,
    })
}
