//! Substitution and redundancy of low-skilled labour after automation.

// `!(x > 0.0)` rejects NaN where `x <= 0.0` would let it through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use super::{LabourComposition, LabourError};

/// Computes `(substitution_rate, redundancy_share)` between two eras of
/// the same path.
///
/// With `l_n`/`l_a` the low-skilled seconds before/after and `x_a` the
/// automated seconds after:
///
/// * substitution rate `= (l_n - l_a) / x_a`, human seconds replaced per
///   automated second;
/// * redundancy share `= 1 - l_a / l_n`, the fraction of baseline
///   low-skilled work no longer performed by people.
///
/// Both go negative when low-skilled work grew despite automation; values
/// are reported as computed, without clamping.
pub fn displacement(
    before: &LabourComposition,
    after: &LabourComposition,
) -> Result<(f64, f64), LabourError> {
    let baseline_low = before.low_skilled_seconds;
    if !(baseline_low > 0.0) {
        return Err(LabourError::ZeroBaselineLabour);
    }
    let automated = after.automated_seconds.unwrap_or(0.0);
    if !(automated > 0.0) {
        return Err(LabourError::ZeroAutomatedHours);
    }

    let substitution = (baseline_low - after.low_skilled_seconds) / automated;
    let redundancy = 1.0 - after.low_skilled_seconds / baseline_low;
    Ok((substitution, redundancy))
}
