//! Labour composition: who (or what) performs the work in a trace, and how
//! automation shifts that mix between two observation eras.

mod aggregate;
mod config;
mod displacement;

pub use aggregate::{aggregate_labour, LabourComposition};
pub use config::{load_classification, parse_classification, CLASSIFICATION_SCHEMA_VERSION};
pub use displacement::displacement;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Kind of worker an activity's time is booked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabourClass {
    LowSkilled,
    HighSkilled,
    Automated,
    Customer,
}

impl LabourClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LabourClass::LowSkilled => "low_skilled",
            LabourClass::HighSkilled => "high_skilled",
            LabourClass::Automated => "automated",
            LabourClass::Customer => "customer",
        }
    }
}

/// One ordered rule: a glob over activity names and the class it assigns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRule {
    /// Case-sensitive glob; `*` matches any run of characters.
    pub pattern: String,
    pub class: LabourClass,
}

/// Ordered activity-to-class ruleset. First matching rule wins; activities
/// matching no rule get `default_class`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityClassification {
    pub version: u32,
    pub default_class: LabourClass,
    #[serde(default)]
    pub rules: Vec<ClassRule>,
}

/// Compiled form of [`ActivityClassification`] for classifying in bulk.
pub struct ClassMatcher {
    rules: Vec<(Regex, LabourClass)>,
    default_class: LabourClass,
}

impl ClassMatcher {
    pub fn new(classification: &ActivityClassification) -> ClassMatcher {
        ClassMatcher {
            rules: classification
                .rules
                .iter()
                .map(|rule| (glob_to_regex(&rule.pattern), rule.class))
                .collect(),
            default_class: classification.default_class,
        }
    }

    pub fn classify(&self, activity: &str) -> LabourClass {
        self.rules
            .iter()
            .find(|(regex, _)| regex.is_match(activity))
            .map(|(_, class)| *class)
            .unwrap_or(self.default_class)
    }
}

/// Classifies one activity name. Build a [`ClassMatcher`] instead when
/// classifying many.
pub fn classify_activity(activity: &str, classification: &ActivityClassification) -> LabourClass {
    ClassMatcher::new(classification).classify(activity)
}

/// Globs only know `*`; everything else is literal, so the translated
/// regex always compiles.
fn glob_to_regex(pattern: &str) -> Regex {
    let body = pattern
        .split('*')
        .map(regex::escape)
        .collect::<Vec<_>>()
        .join(".*");
    Regex::new(&format!("^{body}$")).expect("escaped glob compiles")
}

#[derive(Debug, Error)]
pub enum LabourError {
    #[error("no traces match path {path:?}")]
    NoTracesOnPath { path: String },
    #[error("before-era low-skilled seconds are zero; displacement is undefined")]
    ZeroBaselineLabour,
    #[error("after-era automated seconds are absent or zero; displacement is undefined")]
    ZeroAutomatedHours,
    #[error("classification config: {0}")]
    Config(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classification(rules: &[(&str, LabourClass)]) -> ActivityClassification {
        ActivityClassification {
            version: 1,
            default_class: LabourClass::LowSkilled,
            rules: rules
                .iter()
                .map(|(pattern, class)| ClassRule {
                    pattern: pattern.to_string(),
                    class: *class,
                })
                .collect(),
        }
    }

    #[test]
    fn prefix_glob_matches_spec_example() {
        let c = classification(&[("W_Call*", LabourClass::LowSkilled)]);
        assert_eq!(
            classify_activity("W_Call incomplete files", &c),
            LabourClass::LowSkilled
        );
    }

    #[test]
    fn first_matching_rule_wins() {
        let c = classification(&[
            ("W_Assess*", LabourClass::HighSkilled),
            ("W_*", LabourClass::LowSkilled),
        ]);
        assert_eq!(
            classify_activity("W_Assess fraud", &c),
            LabourClass::HighSkilled
        );
        assert_eq!(
            classify_activity("W_Call customer", &c),
            LabourClass::LowSkilled
        );
    }

    #[test]
    fn unmatched_names_get_the_default() {
        let c = classification(&[("W_*", LabourClass::HighSkilled)]);
        assert_eq!(classify_activity("O_Sent", &c), LabourClass::LowSkilled);
    }

    #[test]
    fn globs_are_case_sensitive_and_anchored() {
        let c = classification(&[("O_Create*", LabourClass::Automated)]);
        assert_eq!(
            classify_activity("O_Create Offer", &c),
            LabourClass::Automated
        );
        // different case and non-prefix occurrences do not match
        assert_eq!(classify_activity("O_CREATED", &c), LabourClass::LowSkilled);
        assert_eq!(
            classify_activity("Re O_Create Offer", &c),
            LabourClass::LowSkilled
        );
    }

    #[test]
    fn inner_and_suffix_stars_work() {
        let c = classification(&[
            ("*fraud", LabourClass::HighSkilled),
            ("A_*_DONE", LabourClass::Automated),
        ]);
        assert_eq!(
            classify_activity("assess fraud", &c),
            LabourClass::HighSkilled
        );
        assert_eq!(
            classify_activity("A_SCORING_DONE", &c),
            LabourClass::Automated
        );
    }

    #[test]
    fn regex_metacharacters_in_patterns_stay_literal() {
        let c = classification(&[("pay (fast)", LabourClass::Automated)]);
        assert_eq!(classify_activity("pay (fast)", &c), LabourClass::Automated);
        assert_eq!(classify_activity("pay Xfast)", &c), LabourClass::LowSkilled);
    }
}
