//! Classification config file handling.
//!
//! The file is TOML with an explicit schema version:
//!
//! ```toml
//! version = 1
//! default_class = "low_skilled"
//!
//! [[rules]]
//! pattern = "W_Assess*"
//! class = "high_skilled"
//! ```
//!
//! Rules apply top to bottom, first match wins. Classes are
//! `low_skilled`, `high_skilled`, `automated`, and `customer`.

use std::path::Path;

use super::{ActivityClassification, LabourError};

pub const CLASSIFICATION_SCHEMA_VERSION: u32 = 1;

/// Parses classification TOML, rejecting unknown schema versions.
pub fn parse_classification(text: &str) -> Result<ActivityClassification, LabourError> {
    let classification: ActivityClassification =
        toml::from_str(text).map_err(|err| LabourError::Config(err.to_string()))?;
    if classification.version != CLASSIFICATION_SCHEMA_VERSION {
        return Err(LabourError::Config(format!(
            "unsupported schema version {} (expected {})",
            classification.version, CLASSIFICATION_SCHEMA_VERSION
        )));
    }
    Ok(classification)
}

pub fn load_classification(path: &Path) -> Result<ActivityClassification, LabourError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| LabourError::Config(format!("{}: {err}", path.display())))?;
    parse_classification(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labour::LabourClass;

    #[test]
    fn parses_a_full_ruleset() {
        let c = parse_classification(
            r#"
            version = 1
            default_class = "low_skilled"

            [[rules]]
            pattern = "W_Assess*"
            class = "high_skilled"

            [[rules]]
            pattern = "C_*"
            class = "customer"
            "#,
        )
        .unwrap();
        assert_eq!(c.rules.len(), 2);
        assert_eq!(c.rules[0].class, LabourClass::HighSkilled);
        assert_eq!(c.default_class, LabourClass::LowSkilled);
    }

    #[test]
    fn rules_are_optional() {
        let c = parse_classification("version = 1\ndefault_class = \"customer\"\n").unwrap();
        assert!(c.rules.is_empty());
    }

    #[test]
    fn wrong_version_is_rejected() {
        let err = parse_classification("version = 99\ndefault_class = \"low_skilled\"\n");
        assert!(matches!(err, Err(LabourError::Config(msg)) if msg.contains("version 99")));
    }

    #[test]
    fn unknown_class_names_are_rejected() {
        let err = parse_classification(
            "version = 1\ndefault_class = \"robot\"\n",
        );
        assert!(matches!(err, Err(LabourError::Config(_))));
    }
}
