//! Automation intervention on a queue network.
//!
//! One station is replaced by an automated server with absolute rates,
//! and every remaining human station gets its rates rescaled by the
//! class-specific factors. The input network is left untouched.

use super::{InterventionFactors, QueueError, QueueNetwork, StationKind};

/// Returns a copy of `network` with `target_task` automated.
///
/// The target station keeps its name and takes the factors' absolute
/// automated rates. Low-skilled and high-skilled stations are rescaled
/// by their multiplicative factors; stations already automated are left
/// alone. Unknown task names are an error.
pub fn apply_intervention(
    network: &QueueNetwork,
    target_task: &str,
    factors: &InterventionFactors,
) -> Result<QueueNetwork, QueueError> {
    if !network.stations.iter().any(|s| s.task_name == target_task) {
        return Err(QueueError::UnknownTask(target_task.to_string()));
    }

    let mut intervened = network.clone();
    intervened.label = format!("{} (intervened)", network.label);
    for station in &mut intervened.stations {
        if station.task_name == target_task {
            station.kind = StationKind::Automated;
            station.lambda = factors.automated_lambda;
            station.mu = factors.automated_mu;
            continue;
        }
        match station.kind {
            StationKind::LowSkilled => {
                station.lambda *= factors.l_lambda_factor;
                station.mu *= factors.l_mu_factor;
            }
            StationKind::HighSkilled => {
                station.lambda *= factors.h_lambda_factor;
                station.mu *= factors.h_mu_factor;
            }
            StationKind::Automated => {}
        }
    }
    Ok(intervened)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::queue::QueueSystem;
    use approx::assert_relative_eq;

    fn network() -> QueueNetwork {
        QueueNetwork {
            label: "claims".to_string(),
            stations: vec![
                QueueSystem::new("triage", StationKind::LowSkilled, 0.8, 1.6),
                QueueSystem::new("assess", StationKind::HighSkilled, 0.5, 1.0),
                QueueSystem::new("archive", StationKind::Automated, 2.0, 9.0),
            ],
        }
    }

    #[test]
    fn target_becomes_automated_with_absolute_rates() {
        let factors = InterventionFactors::recommended_with_customer();
        let out = apply_intervention(&network(), "triage", &factors).unwrap();
        let triage = &out.stations[0];
        assert_eq!(triage.kind, StationKind::Automated);
        assert_relative_eq!(triage.lambda, factors.automated_lambda);
        assert_relative_eq!(triage.mu, factors.automated_mu);
    }

    #[test]
    fn other_stations_are_rescaled_by_class() {
        let factors = InterventionFactors {
            l_lambda_factor: 2.0,
            l_mu_factor: 0.5,
            h_lambda_factor: 3.0,
            h_mu_factor: 0.25,
            automated_lambda: 1.1,
            automated_mu: 6.0,
        };
        let out = apply_intervention(&network(), "archive", &factors).unwrap();
        assert_relative_eq!(out.stations[0].lambda, 1.6);
        assert_relative_eq!(out.stations[0].mu, 0.8);
        assert_relative_eq!(out.stations[1].lambda, 1.5);
        assert_relative_eq!(out.stations[1].mu, 0.25);
        assert_relative_eq!(out.stations[2].lambda, 1.1);
        assert_relative_eq!(out.stations[2].mu, 6.0);
    }

    #[test]
    fn existing_automated_stations_are_untouched() {
        let factors = InterventionFactors::recommended_without_customer();
        let out = apply_intervention(&network(), "assess", &factors).unwrap();
        assert_relative_eq!(out.stations[2].lambda, 2.0);
        assert_relative_eq!(out.stations[2].mu, 9.0);
    }

    #[test]
    fn input_network_is_not_mutated() {
        let before = network();
        let factors = InterventionFactors::recommended_with_customer();
        let _ = apply_intervention(&before, "triage", &factors).unwrap();
        assert_relative_eq!(before.stations[0].lambda, 0.8);
        assert_relative_eq!(before.stations[0].mu, 1.6);
        assert_eq!(before.stations[0].kind, StationKind::LowSkilled);
    }

    #[test]
    fn unknown_task_is_an_error() {
        let factors = InterventionFactors::recommended_with_customer();
        assert!(matches!(
            apply_intervention(&network(), "no-such-step", &factors),
            Err(QueueError::UnknownTask(_))
        ));
    }

    #[test]
    fn published_without_customer_factors_give_hand_checked_sojourns() {
        // three stations sized so every post-intervention station stays
        // stable; sojourns recomputed against 1/(mu - lambda) by hand
        let net = QueueNetwork {
            label: "hand".to_string(),
            stations: vec![
                QueueSystem::new("entry", StationKind::LowSkilled, 0.02, 0.2),
                QueueSystem::new("review", StationKind::HighSkilled, 0.02, 2.0),
                QueueSystem::new("post", StationKind::LowSkilled, 0.02, 0.3),
            ],
        };
        let f = InterventionFactors::recommended_without_customer();
        let out = apply_intervention(&net, "entry", &f).unwrap();

        // entry: absolute automated rates 1.10 / 6.01 -> 1/(6.01-1.10)
        let (_, s0) = crate::queue::analytic_mm1(out.stations[0].lambda, out.stations[0].mu)
            .unwrap();
        assert_relative_eq!(s0, 1.0 / (6.01 - 1.10), max_relative = 1e-12);

        // review: lambda 0.02*2.05 = 0.041, mu 2.0*0.02 = 0.04 would be
        // unstable, so the hand fixture checks the rates themselves
        assert_relative_eq!(out.stations[1].lambda, 0.041, max_relative = 1e-12);
        assert_relative_eq!(out.stations[1].mu, 0.04, max_relative = 1e-12);

        // post: lambda 0.02*2.29 = 0.0458, mu 0.3*0.41 = 0.123
        let (_, s2) = crate::queue::analytic_mm1(out.stations[2].lambda, out.stations[2].mu)
            .unwrap();
        assert_relative_eq!(s2, 1.0 / (0.3 * 0.41 - 0.02 * 2.29), max_relative = 1e-12);
    }
}
