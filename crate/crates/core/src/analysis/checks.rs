//! Audits of a P-AGD trace against the convergence bounds: bounded
//! iterates, the one-step recursion of consecutive differences, their
//! `E / (t + gamma)` decay, and the final `O(1 / sqrt(T))` residual bound.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::point::VectorPoint;
use crate::trace::{RunTrace, StepRule};

use super::report::{AuditReport, BoundTally};
use super::scalars::ScalarBoundSample;

/// Relative slack on trace inequalities.
pub const TRACE_REL_TOL: f64 = 1e-9;
/// Absolute floor added to every trace allowance, so that bounds which are
/// exactly zero (start at a solution) tolerate rounding in `F(z*)`.
pub const TRACE_ABS_TOL: f64 = 1e-12;

/// `H0 = ||z_0 - z*||`, `D = (sqrt(12) + 1) H0`,
/// `E = max(gamma ||z_1 - z_0||, 12 gamma D)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoremConstants {
    #[serde(rename = "H0")]
    pub h0: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub gamma: f64,
    #[serde(rename = "L")]
    pub lipschitz: f64,
}

impl TheoremConstants {
    /// `first_step` is `||z_1 - z_0||` when known; otherwise `E = 12 gamma D`.
    pub fn new(h0: f64, gamma: f64, lipschitz: f64, first_step: Option<f64>) -> Self {
        let d = (12f64.sqrt() + 1.0) * h0;
        let floor = 12.0 * gamma * d;
        let e = first_step.map_or(floor, |s| (gamma * s).max(floor));
        Self {
            h0,
            d,
            e,
            gamma,
            lipschitz,
        }
    }

    /// Constants for a schedule-based trace and a solution `z*`.
    pub fn from_trace(trace: &RunTrace, solution: &VectorPoint) -> Result<Self> {
        let StepRule::Schedule { gamma, lipschitz } = trace.metadata.step_rule else {
            return Err(Error::NotApplicable(
                "theorem constants need a schedule-based run".into(),
            ));
        };
        solution.ensure_dim(trace.metadata.dim)?;
        let h0 = trace.start().distance(solution);
        Ok(Self::new(h0, gamma, lipschitz, trace.records[0].d_norm))
    }

    /// `L (2E + gamma D) / sqrt(T - 1 + gamma)` for `T >= 1`.
    pub fn residual_bound(&self, t: usize) -> Option<f64> {
        (t >= 1).then(|| {
            self.lipschitz * (2.0 * self.e + self.gamma * self.d)
                / (t as f64 - 1.0 + self.gamma).sqrt()
        })
    }

    /// `25 gamma L D / sqrt(T - 1 + gamma)` for `T >= 1`.
    pub fn explicit_bound(&self, t: usize) -> Option<f64> {
        (t >= 1).then(|| {
            25.0 * self.gamma * self.lipschitz * self.d / (t as f64 - 1.0 + self.gamma).sqrt()
        })
    }

    /// `E / (t + gamma)`.
    pub fn d_decay_bound(&self, t: usize) -> f64 {
        self.e / (t as f64 + self.gamma)
    }
}

/// `||z_t - z*||^2 <= 12 H0^2` and `||z_t - z_0|| <= D` for every `t`.
pub fn check_bounded_iterates(
    trace: &RunTrace,
    solution: Option<&VectorPoint>,
    constants: &TheoremConstants,
) -> Result<AuditReport> {
    const CHECK: &str = "bounded_iterates";
    let Some(z_star) = solution else {
        return Ok(AuditReport::not_applicable(CHECK, "problem has no known solution"));
    };
    z_star.ensure_dim(trace.metadata.dim)?;
    let bound_sq = 12.0 * constants.h0 * constants.h0;
    let mut dist = BoundTally::new(TRACE_REL_TOL, TRACE_ABS_TOL);
    let mut anchor = BoundTally::new(TRACE_REL_TOL, TRACE_ABS_TOL);
    for r in &trace.records {
        dist.push(r.t, r.z.sub(z_star).norm_squared(), bound_sq);
        anchor.push(r.t, r.anchor_distance, constants.d);
    }
    let anchor = anchor.finish("anchor_distance", json!({}));
    let mut report = dist.finish(
        CHECK,
        json!({
            "bound_sq": bound_sq,
            "anchor_bound": constants.d,
        }),
    );
    let max_sq_over_h0_sq = if constants.h0 > 0.0 {
        report.max_ratio().map(|r| 12.0 * r)
    } else {
        None
    };
    let details = report.details.as_object_mut().expect("object details");
    details.insert("max_dist_sq_over_h0_sq".into(), json!(max_sq_over_h0_sq));
    details.insert("anchor_max_ratio".into(), json!(anchor.max_ratio()));
    details.insert("anchor_pass".into(), json!(anchor.pass));
    report.pass &= anchor.pass;
    report.max_violation = report.max_violation.max(anchor.max_violation);
    Ok(report)
}

/// `||d_t|| (t + gamma) <= E` wherever `d_t` is recorded.
pub fn check_d_decay(trace: &RunTrace, constants: &TheoremConstants) -> AuditReport {
    let mut tally = BoundTally::new(TRACE_REL_TOL, TRACE_ABS_TOL);
    for r in &trace.records {
        if let Some(d) = r.d_norm {
            tally.push(r.t, d * (r.t as f64 + constants.gamma), constants.e);
        }
    }
    tally.finish("d_decay", json!({ "E": constants.e }))
}

/// `||d_{t+1}|| <= q_t ||d_t|| + |eps_t| D` for consecutive recorded pairs.
pub fn check_d_recurrence(trace: &RunTrace, constants: &TheoremConstants) -> Result<AuditReport> {
    let mut tally = BoundTally::new(TRACE_REL_TOL, TRACE_ABS_TOL);
    for pair in trace.records.windows(2) {
        let (Some(d_t), Some(d_next)) = (pair[0].d_norm, pair[1].d_norm) else {
            continue;
        };
        let t = pair[0].t;
        let s = ScalarBoundSample::new(constants.gamma, t as u64)?;
        tally.push(t, d_next, s.q_t * d_t + s.epsilon_t.abs() * constants.d);
    }
    Ok(tally.finish("d_recurrence", json!({ "D": constants.d })))
}

/// The residual bound at every `T >= 1`:
///
/// * `||F(z_T) + c_T|| <= L (2E + gamma D) / sqrt(T - 1 + gamma)`,
/// * `tan(z_T) <= ||F(z_T) + c_T||` (additive `1e-9`),
/// * `tan(z_T) <= 25 gamma L D / sqrt(T - 1 + gamma)`.
///
/// Where the tangent residual is unavailable the certificate stands in.
pub fn check_main_bound(trace: &RunTrace, constants: &TheoremConstants) -> AuditReport {
    let mut main = BoundTally::new(TRACE_REL_TOL, TRACE_ABS_TOL);
    let mut explicit = BoundTally::new(TRACE_REL_TOL, TRACE_ABS_TOL);
    let mut ordering = BoundTally::new(0.0, 1e-9);
    let mut missing_certificates = 0usize;
    for r in trace.records.iter().skip(1) {
        let Some(cert) = r.certificate_residual else {
            missing_certificates += 1;
            continue;
        };
        let bound = constants.residual_bound(r.t).expect("t >= 1");
        main.push(r.t, cert, bound);
        let tan = r.tangent_residual.unwrap_or(cert);
        ordering.push(r.t, tan, cert);
        explicit.push(r.t, tan, constants.explicit_bound(r.t).expect("t >= 1"));
    }
    let last = trace.last();
    let ordering = ordering.finish("tangent_below_certificate", json!({}));
    let explicit = explicit.finish("explicit_bound", json!({}));
    let mut report = main.finish(
        "main_bound",
        json!({
            "final_t": last.t,
            "final_certificate_residual": last.certificate_residual,
            "final_tangent_residual": last.tangent_residual,
            "final_bound": constants.residual_bound(last.t),
            "final_explicit_bound": constants.explicit_bound(last.t),
            "missing_certificates": missing_certificates,
        }),
    );
    let details = report.details.as_object_mut().expect("object details");
    details.insert("explicit_max_ratio".into(), json!(explicit.max_ratio()));
    details.insert("explicit_pass".into(), json!(explicit.pass));
    details.insert("tangent_below_certificate".into(), json!(ordering.pass));
    report.pass &= explicit.pass && ordering.pass && missing_certificates == 0;
    report.max_violation = report
        .max_violation
        .max(explicit.max_violation)
        .max(ordering.max_violation);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_follow_definitions() {
        let k = TheoremConstants::new(1.0, 2.0, 1.0, Some(0.5));
        assert!((k.d - (12f64.sqrt() + 1.0)).abs() < 1e-15);
        assert_eq!(k.e, 12.0 * 2.0 * k.d);
        let big = TheoremConstants::new(1.0, 2.0, 1.0, Some(1e3));
        assert_eq!(big.e, 2e3);
        // E = 12 gamma D reduces the main bound to 25 gamma L D.
        let b = k.residual_bound(1).unwrap();
        assert!((b - k.explicit_bound(1).unwrap()).abs() < 1e-12 * b);
        assert!((b - 157.83).abs() < 0.01);
        assert!(k.residual_bound(0).is_none());
    }
}
