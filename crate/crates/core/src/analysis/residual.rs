use serde_json::json;

use crate::algorithms::natural_residual_with;
use crate::error::{check_dim, Result};
use crate::point::VectorPoint;
use crate::problem::ProblemInstance;

use super::report::AuditReport;

/// Additive slack of the natural/tangent ordering check.
pub const RESIDUAL_ORDER_TOL: f64 = 1e-9;

/// `min_{c in A(z)} ||F(z) + c||`, the distance from 0 to `F(z) + A(z)`.
pub fn tangent_residual(problem: &ProblemInstance, z: &VectorPoint) -> Result<f64> {
    check_dim(problem.dim(), z.dim())?;
    problem.part().cone_distance(z, &problem.field().apply(z))
}

/// `||z - J_A(z - F(z))||` with the unit-step resolvent.
pub fn natural_residual(problem: &ProblemInstance, z: &VectorPoint) -> Result<f64> {
    check_dim(problem.dim(), z.dim())?;
    Ok(natural_residual_with(
        problem.part(),
        z,
        &problem.field().apply(z),
    ))
}

/// Checks that the natural residual never exceeds the tangent residual.
pub fn check_residual_order(problem: &ProblemInstance, points: &[VectorPoint]) -> Result<AuditReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut argmax = None;
    let mut pass = true;
    for (i, z) in points.iter().enumerate() {
        let nat = natural_residual(problem, z)?;
        let tan = tangent_residual(problem, z)?;
        let gap = nat - tan;
        if gap > worst {
            worst = gap;
            argmax = Some(i);
        }
        if gap > RESIDUAL_ORDER_TOL {
            pass = false;
        }
    }
    Ok(AuditReport {
        check: "residual_order".into(),
        applicable: true,
        pass,
        max_violation: (worst - RESIDUAL_ORDER_TOL).max(0.0),
        argmax_t: argmax,
        details: json!({
            "points": points.len(),
            "max_nat_minus_tan": if points.is_empty() { 0.0 } else { worst },
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::MonotoneField;
    use crate::linalg::Matrix;
    use crate::part::MonotonePart;

    fn pt(v: &[f64]) -> VectorPoint {
        VectorPoint::new(v.to_vec()).unwrap()
    }

    /// Constant field `F = offset`.
    fn constant(part: MonotonePart, offset: &[f64]) -> ProblemInstance {
        let d = offset.len();
        let f = MonotoneField::linear(Matrix::zeros(d, d), offset.to_vec(), 1.0).unwrap();
        ProblemInstance::new("const", f, part, pt(&vec![0.0; d]), None).unwrap()
    }

    #[test]
    fn unconstrained_residuals_are_field_norm() {
        let p = constant(MonotonePart::zero(2).unwrap(), &[3.0, 4.0]);
        let z = pt(&[7.0, -1.0]);
        assert_eq!(tangent_residual(&p, &z).unwrap(), 5.0);
        assert_eq!(natural_residual(&p, &z).unwrap(), 5.0);
        let r = check_residual_order(&p, &[z]).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_violation, 0.0);
    }

    #[test]
    fn box_examples() {
        let q = MonotonePart::boxed(vec![0.0; 2], vec![f64::INFINITY; 2]).unwrap();
        let p = constant(q, &[3.0, 2.0]);
        assert_eq!(tangent_residual(&p, &pt(&[0.0, 1.0])).unwrap(), 2.0);

        let b = MonotonePart::boxed(vec![-1.0; 2], vec![1.0; 2]).unwrap();
        let p = constant(b, &[-0.5, 0.0]);
        assert_eq!(natural_residual(&p, &pt(&[1.0, 0.0])).unwrap(), 0.0);
        assert_eq!(tangent_residual(&p, &pt(&[1.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn tangent_residual_outside_domain_errors() {
        let q = MonotonePart::nonneg_orthant(2).unwrap();
        let p = constant(q, &[1.0, 1.0]);
        assert!(tangent_residual(&p, &pt(&[-1.0, 0.0])).is_err());
        assert!(natural_residual(&p, &pt(&[-1.0, 0.0])).is_ok());
    }
}
