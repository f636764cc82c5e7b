//! Residuals and the audit suite for anchored runs.
//!
//! Each checker returns an [`AuditReport`] instead of panicking or erroring
//! on a violated inequality; callers decide what a failure means.

mod checks;
mod oracle;
mod rate;
mod report;
mod residual;
mod scalars;

pub use checks::{
    check_bounded_iterates, check_d_decay, check_d_recurrence, check_main_bound,
    TheoremConstants, TRACE_ABS_TOL, TRACE_REL_TOL,
};
pub use oracle::{brute_force_tangent, ORACLE_MAX_DIM};
pub use rate::{fit_rate, fit_rate_series, RateFit, DEFAULT_FIT_WINDOW, MIN_FIT_RECORDS};
pub use report::AuditReport;
pub use residual::{check_residual_order, natural_residual, tangent_residual, RESIDUAL_ORDER_TOL};
pub use scalars::{check_scalar_bounds, ScalarBoundSample, SCALAR_REL_TOL};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::part::MonotonePart;
use crate::point::VectorPoint;
use crate::problem::ProblemInstance;
use crate::trace::RunTrace;

/// Seeded points in the domain of `part`, obtained by resolving uniform
/// samples from `[-spread, spread]^d`. Resolving lands a positive fraction
/// of them on active bounds and zero coordinates.
pub fn random_domain_points(
    part: &MonotonePart,
    count: usize,
    seed: u64,
    spread: f64,
) -> Vec<VectorPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let w: Vec<f64> = (0..part.dim())
                .map(|_| rng.random_range(-spread..=spread))
                .collect();
            part.resolve_unchecked(1.0, VectorPoint::from_raw(w))
        })
        .collect()
}

/// Knobs for [`audit_run`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditOptions {
    pub residual_points: usize,
    pub seed: u64,
    pub spread: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            residual_points: 1000,
            seed: 0,
            spread: 10.0,
        }
    }
}

/// Runs every applicable check on a schedule-based trace.
///
/// `constants` default to the ones derived from the trace and the
/// problem's known solution.
pub fn audit_run(
    problem: &ProblemInstance,
    trace: &RunTrace,
    constants: Option<&TheoremConstants>,
    options: &AuditOptions,
) -> Result<Vec<AuditReport>> {
    let gamma = trace
        .gamma()
        .ok_or_else(|| Error::NotApplicable("audits need a schedule-based run".into()))?;
    let derived = match (constants, problem.known_solution()) {
        (Some(k), _) => Some(*k),
        (None, Some(sol)) => Some(TheoremConstants::from_trace(trace, sol)?),
        (None, None) => None,
    };

    let mut reports = Vec::new();
    match derived {
        Some(k) => {
            reports.push(check_bounded_iterates(trace, problem.known_solution(), &k)?);
            reports.push(check_d_decay(trace, &k));
            reports.push(check_d_recurrence(trace, &k)?);
            reports.push(check_main_bound(trace, &k));
        }
        None => {
            for check in ["bounded_iterates", "d_decay", "d_recurrence", "main_bound"] {
                reports.push(AuditReport::not_applicable(
                    check,
                    "problem has no known solution",
                ));
            }
        }
    }
    let points = random_domain_points(
        problem.part(),
        options.residual_points,
        options.seed,
        options.spread,
    );
    reports.push(check_residual_order(problem, &points)?);
    reports.push(check_scalar_bounds(gamma, trace.metadata.iterations as u64)?);
    Ok(reports)
}
