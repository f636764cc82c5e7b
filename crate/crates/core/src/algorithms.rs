//! Iteration schemes for `0 in F(z) + A(z)`.
//!
//! * proximal anchored gradient descent (P-AGD):
//!   `z_{t+1} = J_{a_t A}((1 - b_t) z_t + b_t z_0 - a_t F(z_t))`,
//! * its unconstrained special case (AGD),
//! * forward-backward gradient descent (GD) and extragradient (EG) as
//!   baselines with a constant step.
//!
//! Every step also returns the certificate
//! `c_{t+1} = (w_t - z_{t+1}) / a_t`, where `w_t` is the resolvent
//! argument. It lies in `A(z_{t+1})` because `z_{t+1} = J_{a_t A}(w_t)`,
//! so `||F(z_{t+1}) + c_{t+1}||` bounds the tangent residual from above.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::field::MonotoneField;
use crate::part::MonotonePart;
use crate::point::VectorPoint;
use crate::problem::ProblemInstance;
use crate::schedule::StepSchedule;
use crate::trace::{RunTrace, StepRule, TraceMetadata, TraceRecord};

/// Default distance from the anchor at which a run counts as diverged.
pub const DEFAULT_DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Method identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MethodKind {
    #[serde(rename = "p-agd")]
    ProximalAnchored,
    #[serde(rename = "agd")]
    Anchored,
    #[serde(rename = "gd")]
    Gradient,
    #[serde(rename = "eg")]
    Extragradient,
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::ProximalAnchored => "p-agd",
            Self::Anchored => "agd",
            Self::Gradient => "gd",
            Self::Extragradient => "eg",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "p-agd" | "pagd" => Some(Self::ProximalAnchored),
            "agd" => Some(Self::Anchored),
            "gd" => Some(Self::Gradient),
            "eg" => Some(Self::Extragradient),
            _ => None,
        }
    }

    pub fn uses_schedule(self) -> bool {
        matches!(self, Self::ProximalAnchored | Self::Anchored)
    }
}

impl std::fmt::Display for MethodKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A method together with its step rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    ProximalAnchored(StepSchedule),
    Anchored(StepSchedule),
    Gradient { step: f64 },
    Extragradient { step: f64 },
}

impl Method {
    pub fn kind(&self) -> MethodKind {
        match self {
            Self::ProximalAnchored(_) => MethodKind::ProximalAnchored,
            Self::Anchored(_) => MethodKind::Anchored,
            Self::Gradient { .. } => MethodKind::Gradient,
            Self::Extragradient { .. } => MethodKind::Extragradient,
        }
    }

    pub fn step_rule(&self) -> StepRule {
        match *self {
            Self::ProximalAnchored(s) | Self::Anchored(s) => StepRule::Schedule {
                gamma: s.gamma(),
                lipschitz: s.lipschitz(),
            },
            Self::Gradient { step } | Self::Extragradient { step } => StepRule::Constant { step },
        }
    }

    pub fn schedule(&self) -> Option<StepSchedule> {
        match *self {
            Self::ProximalAnchored(s) | Self::Anchored(s) => Some(s),
            _ => None,
        }
    }

    /// Baseline constant step `1 / (2L)`.
    pub fn default_constant_step(lipschitz: f64) -> f64 {
        0.5 / lipschitz
    }
}

/// Options for [`run`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub divergence_threshold: f64,
    /// Stop once the certificate residual falls to this value.
    pub early_stop_tolerance: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            divergence_threshold: DEFAULT_DIVERGENCE_THRESHOLD,
            early_stop_tolerance: None,
        }
    }
}

/// `(1 - beta) z_t + beta z_0 - alpha F(z_t)`. Shared by P-AGD and AGD so
/// the two agree bit for bit.
fn anchored_argument(
    z_t: &VectorPoint,
    z_0: &VectorPoint,
    f_t: &VectorPoint,
    alpha: f64,
    beta: f64,
) -> VectorPoint {
    let keep = 1.0 - beta;
    VectorPoint::from_raw(
        z_t.as_slice()
            .iter()
            .zip(z_0.as_slice())
            .zip(f_t.as_slice())
            .map(|((z, a), f)| keep * z + beta * a - alpha * f)
            .collect(),
    )
}

fn certificate(argument: &VectorPoint, z_next: &VectorPoint, alpha: f64) -> VectorPoint {
    VectorPoint::from_raw(
        argument
            .as_slice()
            .iter()
            .zip(z_next.as_slice())
            .map(|(w, z)| (w - z) / alpha)
            .collect(),
    )
}

fn resolve_with_certificate(
    part: &MonotonePart,
    alpha: f64,
    argument: VectorPoint,
) -> (VectorPoint, VectorPoint) {
    let z_next = part.resolve_unchecked(alpha, argument.clone());
    let c_next = certificate(&argument, &z_next, alpha);
    (z_next, c_next)
}

fn check_step(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "step size must be positive, got {alpha}"
        )))
    }
}

fn p_agd_step_with(
    part: &MonotonePart,
    sched: &StepSchedule,
    t: u64,
    z_t: &VectorPoint,
    z_0: &VectorPoint,
    f_t: &VectorPoint,
) -> (VectorPoint, VectorPoint) {
    let (alpha, beta) = sched.step(t);
    resolve_with_certificate(part, alpha, anchored_argument(z_t, z_0, f_t, alpha, beta))
}

/// One P-AGD step from `z_t`; returns `(z_{t+1}, c_{t+1})`.
pub fn p_agd_step(
    problem: &ProblemInstance,
    sched: &StepSchedule,
    t: u64,
    z_t: &VectorPoint,
    z_0: &VectorPoint,
) -> Result<(VectorPoint, VectorPoint)> {
    check_dim(problem.dim(), z_t.dim())?;
    check_dim(problem.dim(), z_0.dim())?;
    let f_t = problem.field().apply(z_t);
    Ok(p_agd_step_with(problem.part(), sched, t, z_t, z_0, &f_t))
}

/// One unconstrained anchored step `z_t - a_t F(z_t) + b_t (z_0 - z_t)`.
///
/// Evaluated in the same form as [`p_agd_step`], so the result equals the
/// P-AGD step with `A = 0` exactly.
pub fn agd_step(
    field: &MonotoneField,
    sched: &StepSchedule,
    t: u64,
    z_t: &VectorPoint,
    z_0: &VectorPoint,
) -> Result<VectorPoint> {
    check_dim(field.dim(), z_t.dim())?;
    check_dim(field.dim(), z_0.dim())?;
    let (alpha, beta) = sched.step(t);
    Ok(anchored_argument(z_t, z_0, &field.apply(z_t), alpha, beta))
}

fn gd_step_with(
    part: &MonotonePart,
    alpha: f64,
    z_t: &VectorPoint,
    f_t: &VectorPoint,
) -> (VectorPoint, VectorPoint) {
    resolve_with_certificate(part, alpha, z_t.sub_scaled(alpha, f_t))
}

/// Forward-backward step `J_{aA}(z_t - a F(z_t))`.
pub fn gd_step(problem: &ProblemInstance, alpha: f64, z_t: &VectorPoint) -> Result<VectorPoint> {
    check_step(alpha)?;
    check_dim(problem.dim(), z_t.dim())?;
    let f_t = problem.field().apply(z_t);
    Ok(gd_step_with(problem.part(), alpha, z_t, &f_t).0)
}

fn eg_step_with(
    problem: &ProblemInstance,
    alpha: f64,
    z_t: &VectorPoint,
    f_t: &VectorPoint,
) -> (VectorPoint, VectorPoint) {
    let part = problem.part();
    let half = part.resolve_unchecked(alpha, z_t.sub_scaled(alpha, f_t));
    let f_half = problem.field().apply(&half);
    resolve_with_certificate(part, alpha, z_t.sub_scaled(alpha, &f_half))
}

/// Extragradient step: look ahead to `z_{t+1/2} = J_{aA}(z_t - a F(z_t))`,
/// then move from `z_t` along `F(z_{t+1/2})`.
pub fn eg_step(problem: &ProblemInstance, alpha: f64, z_t: &VectorPoint) -> Result<VectorPoint> {
    check_step(alpha)?;
    check_dim(problem.dim(), z_t.dim())?;
    let f_t = problem.field().apply(z_t);
    Ok(eg_step_with(problem, alpha, z_t, &f_t).0)
}

/// `||z - J_A(z - F(z))||` given `F(z)`.
pub(crate) fn natural_residual_with(part: &MonotonePart, z: &VectorPoint, f: &VectorPoint) -> f64 {
    z.distance(&part.resolve_unchecked(1.0, z.sub(f)))
}

fn make_record(
    problem: &ProblemInstance,
    t: usize,
    z: VectorPoint,
    f: &VectorPoint,
    c: Option<VectorPoint>,
    z_0: &VectorPoint,
) -> TraceRecord {
    let part = problem.part();
    let certificate_residual = c.as_ref().map(|c| f.add(c).norm());
    TraceRecord {
        t,
        natural_residual: natural_residual_with(part, &z, f),
        tangent_residual: part.cone_distance(&z, f).ok(),
        anchor_distance: z.distance(z_0),
        d_norm: None,
        certificate_residual,
        c,
        z,
    }
}

/// Runs `horizon` iterations of `method` from the problem's start point and
/// records diagnostics at every iterate.
pub fn run(
    problem: &ProblemInstance,
    method: &Method,
    horizon: usize,
    options: &RunOptions,
) -> Result<RunTrace> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon T must be at least 1".into()));
    }
    match method {
        Method::Gradient { step } | Method::Extragradient { step } => check_step(*step)?,
        Method::Anchored(_) if !matches!(problem.part(), MonotonePart::Zero { .. }) => {
            return Err(Error::InvalidParameter(
                "unconstrained AGD requires the zero part; use p-agd".into(),
            ))
        }
        _ => {}
    }

    let z_0 = problem.start().clone();
    let field = problem.field();
    let mut f_t = field.apply(&z_0);
    if !f_t.is_finite() {
        return Err(Error::NumericFailure { t: 0 });
    }
    let mut records = Vec::with_capacity(horizon + 1);
    records.push(make_record(problem, 0, z_0.clone(), &f_t, None, &z_0));
    let mut diverged = false;
    let mut stopped_early = false;

    for t in 0..horizon {
        let z_t = &records[t].z;
        let (z_next, c_next) = match method {
            Method::ProximalAnchored(s) => p_agd_step_with(problem.part(), s, t as u64, z_t, &z_0, &f_t),
            Method::Anchored(s) => {
                let (alpha, beta) = s.step(t as u64);
                let z_next = anchored_argument(z_t, &z_0, &f_t, alpha, beta);
                (z_next, VectorPoint::zeros(z_0.dim()))
            }
            Method::Gradient { step } => gd_step_with(problem.part(), *step, z_t, &f_t),
            Method::Extragradient { step } => eg_step_with(problem, *step, z_t, &f_t),
        };
        let f_next = field.apply(&z_next);
        if !(z_next.is_finite() && c_next.is_finite() && f_next.is_finite()) {
            return Err(Error::NumericFailure { t: t + 1 });
        }
        records[t].d_norm = Some(z_next.distance(z_t));
        let record = make_record(problem, t + 1, z_next, &f_next, Some(c_next), &z_0);
        let far = record.anchor_distance > options.divergence_threshold;
        let done = match (options.early_stop_tolerance, record.certificate_residual) {
            (Some(tol), Some(r)) => r <= tol,
            _ => false,
        };
        records.push(record);
        f_t = f_next;
        if far {
            diverged = true;
            break;
        }
        if done {
            stopped_early = true;
            break;
        }
    }

    Ok(RunTrace {
        metadata: TraceMetadata {
            method: method.kind(),
            step_rule: method.step_rule(),
            label: problem.label().to_string(),
            dim: problem.dim(),
            horizon,
            iterations: records.len() - 1,
            diverged,
            stopped_early,
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn pt(v: &[f64]) -> VectorPoint {
        VectorPoint::new(v.to_vec()).unwrap()
    }

    fn rotation(part: MonotonePart, start: &[f64]) -> ProblemInstance {
        ProblemInstance::new(
            "rot",
            MonotoneField::rotation(1.0).unwrap(),
            part,
            pt(start),
            None,
        )
        .unwrap()
    }

    fn null_field(dim: usize) -> MonotoneField {
        MonotoneField::linear(Matrix::zeros(dim, dim), vec![0.0; dim], 1.0).unwrap()
    }

    #[test]
    fn p_agd_fixed_anchor_with_null_field() {
        let p = ProblemInstance::new(
            "null",
            null_field(2),
            MonotonePart::zero(2).unwrap(),
            pt(&[0.3, -0.4]),
            None,
        )
        .unwrap();
        let s = StepSchedule::new(2.0, 1.0).unwrap();
        let z0 = p.start().clone();
        let (z1, c1) = p_agd_step(&p, &s, 5, &z0, &z0).unwrap();
        assert_eq!(z1, z0);
        assert_eq!(c1, pt(&[0.0, 0.0]));
    }

    #[test]
    fn p_agd_first_step_on_rotation() {
        let p = rotation(MonotonePart::zero(2).unwrap(), &[1.0, 0.0]);
        let s = StepSchedule::new(2.0, 1.0).unwrap();
        let z0 = p.start().clone();
        let (z1, c1) = p_agd_step(&p, &s, 0, &z0, &z0).unwrap();
        assert_eq!(z1[0], 1.0);
        assert!((z1[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(c1, pt(&[0.0, 0.0]));
        assert_eq!(agd_step(p.field(), &s, 0, &z0, &z0).unwrap(), z1);
    }

    #[test]
    fn p_agd_first_step_is_forward_backward_from_anchor() {
        // beta_0 = 1 reduces the argument to z_0 - a_0 F(z_0).
        let p = rotation(MonotonePart::boxed(vec![-0.5; 2], vec![0.5; 2]).unwrap(), &[1.0, 0.0]);
        let s = StepSchedule::new(2.0, 1.0).unwrap();
        let z0 = p.start().clone();
        let (z1, c1) = p_agd_step(&p, &s, 0, &z0, &z0).unwrap();
        let alpha = s.alpha(0);
        let w = z0.sub_scaled(alpha, &p.field().evaluate(&z0).unwrap());
        assert_eq!(z1, p.part().resolvent(alpha, &w).unwrap());
        assert_eq!(z1, pt(&[0.5, 0.5]));
        assert!(p.part().membership_slack(&z1, &c1).unwrap() <= 1e-9);
    }

    #[test]
    fn agd_with_null_field_interpolates() {
        let s = StepSchedule::new(3.0, 1.0).unwrap();
        let z0 = pt(&[1.0, 1.0]);
        let zt = pt(&[4.0, -2.0]);
        let (_, beta) = s.step(3);
        let z = agd_step(&null_field(2), &s, 3, &zt, &z0).unwrap();
        for i in 0..2 {
            assert_eq!(z[i], (1.0 - beta) * zt[i] + beta * z0[i]);
        }
    }

    #[test]
    fn gd_step_examples() {
        let p = ProblemInstance::new(
            "null",
            null_field(2),
            MonotonePart::boxed(vec![-1.0; 2], vec![1.0; 2]).unwrap(),
            pt(&[5.0, 0.0]),
            None,
        )
        .unwrap();
        assert_eq!(gd_step(&p, 0.7, &pt(&[5.0, 0.0])).unwrap(), pt(&[1.0, 0.0]));
        assert_eq!(gd_step(&p, 0.7, &pt(&[0.5, 0.0])).unwrap(), pt(&[0.5, 0.0]));

        let r = rotation(MonotonePart::zero(2).unwrap(), &[1.0, 0.0]);
        let z = gd_step(&r, 0.1, &pt(&[1.0, 0.0])).unwrap();
        assert_eq!(z, pt(&[1.0, 0.1]));
        assert!((z.norm_squared() - 1.01).abs() < 1e-15);
        assert!(gd_step(&r, 0.0, &pt(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn eg_step_examples() {
        let r = rotation(MonotonePart::zero(2).unwrap(), &[1.0, 0.0]);
        let alpha = 0.3;
        let z = eg_step(&r, alpha, &pt(&[1.0, 0.0])).unwrap();
        assert!((z[0] - (1.0 - alpha * alpha)).abs() < 1e-16);
        assert!((z[1] - alpha).abs() < 1e-16);

        let id = ProblemInstance::new(
            "id",
            MonotoneField::linear(Matrix::identity(2), vec![0.0; 2], 1.0).unwrap(),
            MonotonePart::nonneg_orthant(2).unwrap(),
            pt(&[1.0, 1.0]),
            None,
        )
        .unwrap();
        assert_eq!(eg_step(&id, 0.5, &pt(&[1.0, 1.0])).unwrap(), pt(&[0.75, 0.75]));
    }

    #[test]
    fn run_records_certificates() {
        let p = rotation(MonotonePart::ball(vec![0.0; 2], 0.5).unwrap(), &[1.0, 0.0]);
        let s = StepSchedule::new(2.0, 1.0).unwrap();
        let trace = run(&p, &Method::ProximalAnchored(s), 50, &RunOptions::default()).unwrap();
        assert_eq!(trace.records.len(), 51);
        assert!(trace.records[0].c.is_none());
        assert!(trace.records[0].d_norm.is_some());
        assert!(trace.records[50].d_norm.is_none());
        for r in &trace.records[1..] {
            let c = r.c.as_ref().unwrap();
            assert!(p.part().membership_slack(&r.z, c).unwrap() <= 1e-9);
            assert!(r.tangent_residual.unwrap() <= r.certificate_residual.unwrap() + 1e-12);
        }
    }

    #[test]
    fn run_rejects_zero_horizon_and_constrained_agd() {
        let p = rotation(MonotonePart::nonneg_orthant(2).unwrap(), &[1.0, 0.0]);
        let s = StepSchedule::new(2.0, 1.0).unwrap();
        assert!(run(&p, &Method::ProximalAnchored(s), 0, &RunOptions::default()).is_err());
        assert!(run(&p, &Method::Anchored(s), 10, &RunOptions::default()).is_err());
    }

    #[test]
    fn gd_diverges_on_rotation() {
        let p = rotation(MonotonePart::zero(2).unwrap(), &[1.0, 0.0]);
        let trace = run(&p, &Method::Gradient { step: 0.5 }, 500, &RunOptions::default()).unwrap();
        assert!(trace.metadata.diverged);
        // ||z_t||^2 = 1.25^t crosses 1e24 between t = 247 and t = 248.
        assert!((247..=249).contains(&trace.metadata.iterations));

        let short = run(&p, &Method::Gradient { step: 0.5 }, 100, &RunOptions::default()).unwrap();
        for r in &short.records {
            let expected = 1.25f64.powi(r.t as i32);
            assert!((r.z.norm_squared() / expected - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn early_stop() {
        let p = rotation(MonotonePart::zero(2).unwrap(), &[1.0, 0.0]);
        let opts = RunOptions {
            early_stop_tolerance: Some(1e-3),
            ..RunOptions::default()
        };
        let trace = run(&p, &Method::Extragradient { step: 0.5 }, 10_000, &opts).unwrap();
        assert!(trace.metadata.stopped_early);
        assert!(trace.records.last().unwrap().certificate_residual.unwrap() <= 1e-3);
    }

    #[test]
    fn non_finite_iterates_are_numeric_failures() {
        let huge = MonotoneField::linear(
            Matrix::from_row_major(1, 1, vec![1e300]).unwrap(),
            vec![0.0],
            1e300,
        )
        .unwrap();
        let p = ProblemInstance::new("huge", huge, MonotonePart::zero(1).unwrap(), pt(&[1e10]), None)
            .unwrap();
        let opts = RunOptions {
            divergence_threshold: f64::INFINITY,
            ..RunOptions::default()
        };
        let err = run(&p, &Method::Gradient { step: 1.0 }, 10, &opts).unwrap_err();
        assert!(matches!(err, Error::NumericFailure { .. }));
    }
}
