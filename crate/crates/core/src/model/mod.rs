//! Productivity arithmetic relating mean case execution times across two
//! eras of the same process.
//!
//! Everything here is a pure function over seconds. The central quantity
//! is the productivity ratio `delta_p = tau_before / tau_after` of mean
//! case times: above 1 the process got faster, below 1 it got slower.
//! The ratio decomposes into a non-negative change rate `psi` with a
//! direction (`Regime`), and `psi` further splits into the gain localized
//! at the automated task (`gamma = kappa * psi`) and the impact of
//! integrating it into the flow (`theta`).

// the negated comparisons are deliberate: `!(x > 0.0)` rejects NaN where
// `x <= 0.0` would let it through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("labour time must be positive (got {0})")]
    ZeroLabour(f64),
    #[error("mean execution times must be positive")]
    NonPositiveTime,
    #[error("productivity ratio must be positive (got {0})")]
    NonPositiveDeltaP(f64),
    #[error("change rate for an improvement must lie in [0, 1) (got {0})")]
    PsiOutOfRange(f64),
    #[error("labour-share base is not positive; the production ratio would be complex-valued")]
    NonPositiveBase,
    #[error("alpha must lie strictly between 0 and 1 (got {0})")]
    AlphaOutOfRange(f64),
}

/// Direction of the productivity change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `delta_p >= 1`: cases complete at least as fast as before.
    Improved,
    /// `delta_p < 1`: cases take longer than before.
    Degraded,
}

/// The full metric set for one path, one customer-time treatment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMetrics {
    pub path: String,
    /// Mean case seconds in the before era.
    pub tau_before_seconds: f64,
    /// Mean case seconds in the after era.
    pub tau_after_seconds: f64,
    /// `tau_before / tau_after`.
    pub delta_p: f64,
    /// Promised improvement of the automated task itself, in [0, 1].
    pub kappa: f64,
    /// Magnitude of the overall change, never negative.
    pub psi: f64,
    /// Part of `psi` explained by the automated task: `kappa * psi`.
    pub gamma: f64,
    /// Part of `psi` explained by integration effects around the task.
    pub theta: f64,
    pub regime: Regime,
}

/// Output per unit of labour time, `P = Y / T`.
pub fn productivity(output: f64, labour_seconds: f64) -> Result<f64, ModelError> {
    if !(labour_seconds > 0.0) {
        return Err(ModelError::ZeroLabour(labour_seconds));
    }
    Ok(output / labour_seconds)
}

/// Productivity ratio of two mean case times, `tau_before / tau_after`.
pub fn delta_p_from_times(
    tau_before_seconds: f64,
    tau_after_seconds: f64,
) -> Result<f64, ModelError> {
    if !(tau_before_seconds > 0.0 && tau_after_seconds > 0.0) {
        return Err(ModelError::NonPositiveTime);
    }
    Ok(tau_before_seconds / tau_after_seconds)
}

/// Splits a ratio into its non-negative change rate and direction:
/// `psi = 1 - 1/delta_p` for an improvement, `1/delta_p - 1` for a
/// degradation. The two branches meet at `delta_p = 1`, `psi = 0`.
pub fn psi_from_delta_p(delta_p: f64) -> Result<(f64, Regime), ModelError> {
    if !(delta_p > 0.0) {
        return Err(ModelError::NonPositiveDeltaP(delta_p));
    }
    if delta_p >= 1.0 {
        Ok((1.0 - 1.0 / delta_p, Regime::Improved))
    } else {
        Ok((1.0 / delta_p - 1.0, Regime::Degraded))
    }
}

/// Reconstructs the after-era mean time from the before-era time and a
/// change rate: `(1 - psi) * tau` improved, `(1 + psi) * tau` degraded.
/// Inverse of [`psi_from_delta_p`] composed with [`delta_p_from_times`].
pub fn tau_a_from_psi(
    tau_before_seconds: f64,
    psi: f64,
    regime: Regime,
) -> Result<f64, ModelError> {
    if !(tau_before_seconds > 0.0) {
        return Err(ModelError::NonPositiveTime);
    }
    if !(0.0..).contains(&psi) {
        return Err(ModelError::PsiOutOfRange(psi));
    }
    match regime {
        Regime::Improved => {
            if psi >= 1.0 {
                return Err(ModelError::PsiOutOfRange(psi));
            }
            Ok((1.0 - psi) * tau_before_seconds)
        }
        Regime::Degraded => Ok((1.0 + psi) * tau_before_seconds),
    }
}

/// Splits the change rate into `(gamma, theta)`: the automated task's own
/// contribution `gamma = kappa * psi`, and the integration remainder.
/// An improvement satisfies `psi = theta + gamma`, a degradation
/// `psi = theta - gamma` (the local gain was realized, yet the surrounding
/// flow lost more than it saved).
pub fn decompose_psi(psi: f64, kappa: f64, regime: Regime) -> (f64, f64) {
    let gamma = kappa * psi;
    let theta = match regime {
        Regime::Improved => psi - gamma,
        Regime::Degraded => psi + gamma,
    };
    (gamma, theta)
}

/// Promised task-level improvement: `kappa = max(0, 1 - after/before)`.
/// Zero when the task did not get faster; never above 1.
pub fn kappa_from_task(
    task_before_seconds: f64,
    task_after_seconds: f64,
) -> Result<f64, ModelError> {
    if !(task_before_seconds > 0.0) || task_after_seconds < 0.0 {
        return Err(ModelError::NonPositiveTime);
    }
    Ok((1.0 - task_after_seconds / task_before_seconds).max(0.0))
}

/// Labour-side inputs of the production-function form of the ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductionInputs {
    pub low_skilled_before: f64,
    pub low_skilled_after: f64,
    pub high_skilled_before: f64,
    pub high_skilled_after: f64,
    /// Automated seconds in the after era.
    pub automated_after: f64,
    /// Human seconds each automated second stands in for.
    pub substitution_rate: f64,
    /// Low-skilled output elasticity, strictly between 0 and 1.
    pub alpha: f64,
}

/// Production-function form of the productivity ratio:
///
/// ```text
/// delta_p = (tau_before / tau_after)
///         * ((l_after + a * x_after) / l_before)^alpha
///         * (h_after / h_before)^(1 - alpha)
/// ```
///
/// When automation exactly replaces the missing low-skilled time
/// (`a = (l_before - l_after) / x_after`) and high-skilled time is
/// unchanged, both labour factors are 1 and this collapses to the plain
/// time ratio for every alpha.
pub fn delta_p_full(
    tau_before_seconds: f64,
    tau_after_seconds: f64,
    inputs: &ProductionInputs,
) -> Result<f64, ModelError> {
    if !(tau_before_seconds > 0.0 && tau_after_seconds > 0.0) {
        return Err(ModelError::NonPositiveTime);
    }
    if !(inputs.alpha > 0.0 && inputs.alpha < 1.0) {
        return Err(ModelError::AlphaOutOfRange(inputs.alpha));
    }
    if !(inputs.low_skilled_before > 0.0 && inputs.high_skilled_before > 0.0) {
        return Err(ModelError::ZeroLabour(if inputs.low_skilled_before > 0.0 {
            inputs.high_skilled_before
        } else {
            inputs.low_skilled_before
        }));
    }
    let low_base =
        (inputs.low_skilled_after + inputs.substitution_rate * inputs.automated_after)
            / inputs.low_skilled_before;
    if !(low_base > 0.0) {
        return Err(ModelError::NonPositiveBase);
    }
    let high_base = inputs.high_skilled_after / inputs.high_skilled_before;
    if !(high_base >= 0.0) {
        return Err(ModelError::NonPositiveBase);
    }
    Ok((tau_before_seconds / tau_after_seconds)
        * low_base.powf(inputs.alpha)
        * high_base.powf(1.0 - inputs.alpha))
}

/// Assembles the metric set for one path from its mean times and the
/// task-level promise.
pub fn path_metrics(
    path: &str,
    tau_before_seconds: f64,
    tau_after_seconds: f64,
    kappa: f64,
) -> Result<PathMetrics, ModelError> {
    let delta_p = delta_p_from_times(tau_before_seconds, tau_after_seconds)?;
    let (psi, regime) = psi_from_delta_p(delta_p)?;
    let (gamma, theta) = decompose_psi(psi, kappa, regime);
    Ok(PathMetrics {
        path: path.to_string(),
        tau_before_seconds,
        tau_after_seconds,
        delta_p,
        kappa,
        psi,
        gamma,
        theta,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn productivity_is_output_over_time() {
        assert_eq!(productivity(10.0, 4.0).unwrap(), 2.5);
        assert!(matches!(
            productivity(10.0, 0.0),
            Err(ModelError::ZeroLabour(_))
        ));
    }

    #[test]
    fn ratio_orientation_is_before_over_after() {
        assert_eq!(delta_p_from_times(600.0, 300.0).unwrap(), 2.0);
        assert_eq!(delta_p_from_times(300.0, 600.0).unwrap(), 0.5);
        assert!(matches!(
            delta_p_from_times(0.0, 300.0),
            Err(ModelError::NonPositiveTime)
        ));
    }

    #[test]
    fn psi_branches_meet_at_one() {
        let (psi, regime) = psi_from_delta_p(2.0).unwrap();
        assert_eq!((psi, regime), (0.5, Regime::Improved));

        let (psi, regime) = psi_from_delta_p(0.5).unwrap();
        assert_eq!((psi, regime), (1.0, Regime::Degraded));

        let (psi, regime) = psi_from_delta_p(1.0).unwrap();
        assert_eq!((psi, regime), (0.0, Regime::Improved));

        assert!(matches!(
            psi_from_delta_p(0.0),
            Err(ModelError::NonPositiveDeltaP(_))
        ));
    }

    #[test]
    fn tau_reconstruction_inverts_psi() {
        assert_eq!(tau_a_from_psi(600.0, 0.5, Regime::Improved).unwrap(), 300.0);
        assert_eq!(tau_a_from_psi(600.0, 1.0, Regime::Degraded).unwrap(), 1200.0);
        assert!(matches!(
            tau_a_from_psi(600.0, 1.0, Regime::Improved),
            Err(ModelError::PsiOutOfRange(_))
        ));
        assert!(matches!(
            tau_a_from_psi(600.0, -0.1, Regime::Degraded),
            Err(ModelError::PsiOutOfRange(_))
        ));
    }

    #[test]
    fn decomposition_respects_the_regime() {
        // degraded: local gain realized, integration lost more
        let (gamma, theta) = decompose_psi(7.03, 0.34, Regime::Degraded);
        assert_relative_eq!(gamma, 2.3902, max_relative = 1e-12);
        assert_relative_eq!(theta, 9.4202, max_relative = 1e-12);

        // improved: psi = theta + gamma
        let (gamma, theta) = decompose_psi(0.60, 0.07, Regime::Improved);
        assert_relative_eq!(gamma, 0.042, max_relative = 1e-12);
        assert_relative_eq!(theta, 0.558, max_relative = 1e-12);
    }

    #[test]
    fn kappa_clamps_at_zero_and_handles_errors() {
        assert_relative_eq!(
            kappa_from_task(1800.0, 600.0).unwrap(),
            2.0 / 3.0,
            max_relative = 1e-15
        );
        // task got slower: no promise
        assert_eq!(kappa_from_task(600.0, 1800.0).unwrap(), 0.0);
        assert_eq!(kappa_from_task(600.0, 0.0).unwrap(), 1.0);
        assert!(kappa_from_task(0.0, 600.0).is_err());
        assert!(kappa_from_task(600.0, -1.0).is_err());
    }

    fn closure_inputs(low_before: f64, low_after: f64, automated: f64, alpha: f64) -> ProductionInputs {
        ProductionInputs {
            low_skilled_before: low_before,
            low_skilled_after: low_after,
            high_skilled_before: 320.0,
            high_skilled_after: 320.0,
            automated_after: automated,
            substitution_rate: (low_before - low_after) / automated,
            alpha,
        }
    }

    #[test]
    fn full_ratio_matches_direct_arithmetic() {
        // base = (79 + 2*21)/100 = 1.21, sqrt = 1.1, times ratio 2 => 2.2
        let inputs = ProductionInputs {
            low_skilled_before: 100.0,
            low_skilled_after: 79.0,
            high_skilled_before: 50.0,
            high_skilled_after: 50.0,
            automated_after: 21.0,
            substitution_rate: 2.0,
            alpha: 0.5,
        };
        let got = delta_p_full(600.0, 300.0, &inputs).unwrap();
        assert_relative_eq!(got, 2.2, max_relative = 1e-12);
    }

    #[test]
    fn full_ratio_collapses_under_exact_substitution() {
        for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let inputs = closure_inputs(100.0, 40.0, 15.0, alpha);
            let got = delta_p_full(600.0, 250.0, &inputs).unwrap();
            assert!((got - 2.4).abs() <= 1e-12, "alpha {alpha}: {got}");
        }
    }

    #[test]
    fn alpha_limits_bracket_the_factors() {
        // low factor 1.21, high factor 1 (unchanged), ratio 1
        let inputs = ProductionInputs {
            low_skilled_before: 100.0,
            low_skilled_after: 79.0,
            high_skilled_before: 50.0,
            high_skilled_after: 50.0,
            automated_after: 21.0,
            substitution_rate: 2.0,
            alpha: 1e-9,
        };
        // alpha -> 0: only the high-skilled factor remains
        assert_relative_eq!(
            delta_p_full(600.0, 600.0, &inputs).unwrap(),
            1.0,
            max_relative = 1e-6
        );
        let inputs = ProductionInputs {
            alpha: 1.0 - 1e-9,
            ..inputs
        };
        // alpha -> 1: only the low-skilled factor remains
        assert_relative_eq!(
            delta_p_full(600.0, 600.0, &inputs).unwrap(),
            1.21,
            max_relative = 1e-6
        );
    }

    #[test]
    fn invalid_full_ratio_inputs_are_rejected() {
        let good = ProductionInputs {
            low_skilled_before: 100.0,
            low_skilled_after: 79.0,
            high_skilled_before: 50.0,
            high_skilled_after: 50.0,
            automated_after: 21.0,
            substitution_rate: 2.0,
            alpha: 0.5,
        };
        assert!(matches!(
            delta_p_full(600.0, 300.0, &ProductionInputs { alpha: 1.0, ..good.clone() }),
            Err(ModelError::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            delta_p_full(
                600.0,
                300.0,
                &ProductionInputs {
                    substitution_rate: -10.0,
                    ..good.clone()
                }
            ),
            Err(ModelError::NonPositiveBase)
        ));
        assert!(matches!(
            delta_p_full(
                600.0,
                300.0,
                &ProductionInputs {
                    low_skilled_before: 0.0,
                    ..good
                }
            ),
            Err(ModelError::ZeroLabour(_))
        ));
    }

    #[test]
    fn metric_assembly_is_internally_consistent() {
        let metrics = path_metrics("A", 15000.0, 22800.0, 2.0 / 3.0).unwrap();
        assert_eq!(metrics.regime, Regime::Degraded);
        assert!(metrics.delta_p < 1.0);
        assert_relative_eq!(metrics.gamma, metrics.kappa * metrics.psi, max_relative = 1e-15);
        assert_relative_eq!(
            metrics.theta,
            metrics.psi + metrics.gamma,
            max_relative = 1e-15
        );

        let metrics = path_metrics("A", 7800.0, 6600.0, 2.0 / 3.0).unwrap();
        assert_eq!(metrics.regime, Regime::Improved);
        assert_relative_eq!(
            metrics.theta,
            metrics.psi - metrics.gamma,
            max_relative = 1e-15
        );
    }

    #[test]
    fn no_change_yields_exact_zeros() {
        let metrics = path_metrics("A", 1234.5, 1234.5, 0.4).unwrap();
        assert_eq!(metrics.delta_p, 1.0);
        assert_eq!(metrics.psi, 0.0);
        assert_eq!(metrics.gamma, 0.0);
        assert_eq!(metrics.theta, 0.0);
        assert_eq!(metrics.regime, Regime::Improved);
    }
}
