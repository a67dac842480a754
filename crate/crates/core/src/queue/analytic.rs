//! Closed-form M/M/1 steady-state means.

use super::QueueError;

/// Returns `(mean_wait, mean_sojourn)` in seconds for a stable M/M/1
/// station: wait `= lambda / (mu * (mu - lambda))`, sojourn
/// `= 1 / (mu - lambda)`.
pub fn analytic_mm1(lambda: f64, mu: f64) -> Result<(f64, f64), QueueError> {
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(QueueError::NonPositiveRate {
            task_name: String::new(),
            lambda,
            mu,
        });
    }
    if lambda >= mu {
        return Err(QueueError::Unstable {
            task_name: String::new(),
            lambda,
            mu,
        });
    }
    let sojourn = 1.0 / (mu - lambda);
    let wait = lambda / (mu * (mu - lambda));
    Ok((wait, sojourn))
}
