//! Scalar sequences of the one-step recursion for consecutive differences.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::schedule::StepSchedule;

use super::report::AuditReport;

/// Relative slack for the pure scalar inequalities.
pub const SCALAR_REL_TOL: f64 = 1e-12;

/// `lambda_t`, `epsilon_t` and `q_t` at one `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarBoundSample {
    pub t: u64,
    pub gamma: f64,
    /// `alpha_{t+1} / alpha_t - beta_{t+1}`.
    pub lambda_t: f64,
    /// `beta_{t+1} - (alpha_{t+1} / alpha_t) beta_t`.
    pub epsilon_t: f64,
    /// `sqrt(lambda_t^2 + alpha_{t+1}^2 L^2)`.
    pub q_t: f64,
}

impl ScalarBoundSample {
    /// Evaluates the definitions through the schedule. Both
    /// `alpha_{t+1} / alpha_t` and `alpha_{t+1} L` are free of `L`, so a unit
    /// constant is used.
    pub fn new(gamma: f64, t: u64) -> Result<Self> {
        let sched = StepSchedule::new(gamma, 1.0)?;
        let (alpha_t, beta_t) = sched.step(t);
        let (alpha_next, beta_next) = sched.step(t + 1);
        let ratio = alpha_next / alpha_t;
        let lambda_t = ratio - beta_next;
        let epsilon_t = beta_next - ratio * beta_t;
        let q_t = (lambda_t * lambda_t + alpha_next * alpha_next).sqrt();
        Ok(Self {
            t,
            gamma,
            lambda_t,
            epsilon_t,
            q_t,
        })
    }

    /// `1 - 9 / (8 (t + 1 + gamma))`.
    pub fn q_bound(&self) -> f64 {
        1.0 - 9.0 / (8.0 * (self.t as f64 + 1.0 + self.gamma))
    }

    /// `gamma / (t + gamma)^2`.
    pub fn epsilon_bound(&self) -> f64 {
        let r = self.t as f64 + self.gamma;
        self.gamma / (r * r)
    }
}

/// Checks `q_t <= 1 - 9/(8(t+1+gamma))`, `|eps_t| <= gamma/(t+gamma)^2`
/// and `lambda_t >= 0` for every `t` in `0..=t_max`.
pub fn check_scalar_bounds(gamma: f64, t_max: u64) -> Result<AuditReport> {
    if !(gamma.is_finite() && gamma >= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "scalar bounds require gamma >= 2, got {gamma}"
        )));
    }
    let mut pass = true;
    let mut max_violation: f64 = 0.0;
    let mut argmax_t = None;
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut max_q_ratio = f64::NEG_INFINITY;
    let mut max_eps_ratio = f64::NEG_INFINITY;
    let mut min_lambda = f64::INFINITY;

    for t in 0..=t_max {
        let s = ScalarBoundSample::new(gamma, t)?;
        let q_bound = s.q_bound();
        let e_bound = s.epsilon_bound();
        let excess = [
            s.q_t - q_bound * (1.0 + SCALAR_REL_TOL),
            s.epsilon_t.abs() - e_bound * (1.0 + SCALAR_REL_TOL),
            -s.lambda_t - SCALAR_REL_TOL,
        ];
        for e in excess {
            if e > 0.0 || e.is_nan() {
                pass = false;
                max_violation = max_violation.max(e);
            }
        }
        let q_ratio = s.q_t / q_bound;
        let e_ratio = s.epsilon_t.abs() / e_bound;
        max_q_ratio = max_q_ratio.max(q_ratio);
        max_eps_ratio = max_eps_ratio.max(e_ratio);
        min_lambda = min_lambda.min(s.lambda_t);
        let ratio = q_ratio.max(e_ratio);
        if ratio > worst_ratio {
            worst_ratio = ratio;
            argmax_t = Some(t as usize);
        }
    }

    Ok(AuditReport {
        check: "scalar_bounds".into(),
        applicable: true,
        pass,
        max_violation,
        argmax_t,
        details: json!({
            "gamma": gamma,
            "t_max": t_max,
            "max_ratio": worst_ratio,
            "max_q_ratio": max_q_ratio,
            "max_epsilon_ratio": max_eps_ratio,
            "min_lambda": min_lambda,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_sample_at_gamma_two() {
        let s = ScalarBoundSample::new(2.0, 0).unwrap();
        let lambda = (2.0f64 / 3.0).sqrt() - 2.0 / 3.0;
        assert!((s.lambda_t - lambda).abs() < 1e-15);
        assert!((s.q_t - (lambda * lambda + 1.0 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.q_t - 0.5965).abs() < 5e-5);
        assert_eq!(s.q_bound(), 0.625);
        assert!((s.epsilon_t.abs() - 0.1498).abs() < 5e-5);
        assert_eq!(s.epsilon_bound(), 0.5);
    }

    #[test]
    fn small_gamma_rejected() {
        assert!(check_scalar_bounds(1.5, 10).is_err());
    }

    #[test]
    fn bounds_hold_on_short_range() {
        for gamma in [2.0, 2.5, 3.0, 5.0, 10.0] {
            let r = check_scalar_bounds(gamma, 10_000).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.details["min_lambda"].as_f64().unwrap() >= 0.0);
        }
    }
}
