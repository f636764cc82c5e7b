//! Grid-search reference for [`MonotonePart::cone_distance`].
//!
//! `A(z)` is parameterized directly from the geometry of each kind (rays at
//! active bounds, the normal ray of a ball boundary, intervals of the l1
//! subdifferential) and `||g + c||` is minimized by dense sampling followed
//! by local refinement passes, each at a hundredth of the previous step.

use crate::error::{check_dim, Error, Result};
use crate::part::MonotonePart;
use crate::point::VectorPoint;

/// Largest dimension the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 4;

/// Refinement passes after the coarse grid.
const REFINE_PASSES: usize = 3;

/// Minimizes `phi` over `[lo, hi]` on a grid of spacing `step`, then
/// repeatedly refines around the best node at a hundredth of the spacing.
fn grid_min(lo: f64, hi: f64, step: f64, phi: impl Fn(f64) -> f64) -> f64 {
    let nodes = ((hi - lo) / step).ceil() as usize;
    let mut best_x = lo;
    let mut best = phi(lo);
    for k in 1..=nodes {
        let x = (lo + k as f64 * step).min(hi);
        let v = phi(x);
        if v < best {
            best = v;
            best_x = x;
        }
    }
    let mut step = step;
    for _ in 0..REFINE_PASSES {
        let fine = step / 100.0;
        let a = (best_x - step).max(lo);
        let b = (best_x + step).min(hi);
        let fine_nodes = ((b - a) / fine).ceil() as usize;
        for k in 0..=fine_nodes {
            let x = (a + k as f64 * fine).min(b);
            let v = phi(x);
            if v < best {
                best = v;
                best_x = x;
            }
        }
        step = fine;
    }
    best
}

/// Brute-force `min_{c in A(z)} ||g + c||` for `dim <= 4`.
pub fn brute_force_tangent(
    part: &MonotonePart,
    z: &VectorPoint,
    g: &VectorPoint,
    grid_step: f64,
) -> Result<f64> {
    check_dim(part.dim(), z.dim())?;
    check_dim(part.dim(), g.dim())?;
    if part.dim() > ORACLE_MAX_DIM {
        return Err(Error::NotApplicable(format!(
            "oracle supports dimension <= {ORACLE_MAX_DIM}, got {}",
            part.dim()
        )));
    }
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::InvalidParameter("grid step must be positive".into()));
    }
    let reach = 10.0 * g.norm();
    Ok(squared(part, z.as_slice(), g.as_slice(), reach, grid_step)?.sqrt())
}

fn squared(part: &MonotonePart, z: &[f64], g: &[f64], reach: f64, h: f64) -> Result<f64> {
    let tight = |x: f64, b: f64| b.is_finite() && (x - b).abs() <= 1e-12 * (1.0 + b.abs());
    match part {
        MonotonePart::Zero { .. } => Ok(g.iter().map(|x| x * x).sum()),
        MonotonePart::Box { lower, upper } => {
            let mut total = 0.0;
            for i in 0..z.len() {
                total += coordinate_ray(z[i], g[i], lower[i], upper[i], reach, h, tight)?;
            }
            Ok(total)
        }
        MonotonePart::NonnegOrthant { .. } => {
            let mut total = 0.0;
            for i in 0..z.len() {
                total += coordinate_ray(z[i], g[i], 0.0, f64::INFINITY, reach, h, tight)?;
            }
            Ok(total)
        }
        MonotonePart::Ball { center, radius } => {
            let v: Vec<f64> = z.iter().zip(center).map(|(a, b)| a - b).collect();
            let dist = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if dist > radius + 1e-12 * (1.0 + radius) {
                return Err(Error::Domain("point outside the ball".into()));
            }
            if (dist - radius).abs() > 1e-12 * (1.0 + radius) {
                return Ok(g.iter().map(|x| x * x).sum());
            }
            let unit: Vec<f64> = v.iter().map(|x| x / dist).collect();
            Ok(grid_min(0.0, reach, h, |mu| {
                g.iter()
                    .zip(&unit)
                    .map(|(gi, ui)| (gi + mu * ui).powi(2))
                    .sum()
            }))
        }
        MonotonePart::L1Scale { lambda, .. } => Ok(z
            .iter()
            .zip(g)
            .map(|(zi, gi)| {
                if *zi == 0.0 {
                    grid_min(-lambda, *lambda, h, |c| (gi + c).powi(2))
                } else {
                    (gi + lambda * zi.signum()).powi(2)
                }
            })
            .sum()),
        MonotonePart::Product(parts) => {
            let mut start = 0;
            let mut total = 0.0;
            for p in parts {
                let end = start + p.dim();
                total += squared(p, &z[start..end], &g[start..end], reach, h)?;
                start = end;
            }
            Ok(total)
        }
    }
}

fn coordinate_ray(
    zi: f64,
    gi: f64,
    lo: f64,
    hi: f64,
    reach: f64,
    h: f64,
    tight: impl Fn(f64, f64) -> bool,
) -> Result<f64> {
    let on_lo = tight(zi, lo);
    let on_hi = tight(zi, hi);
    if (!on_lo && zi < lo) || (!on_hi && zi > hi) {
        return Err(Error::Domain(format!("{zi} outside [{lo}, {hi}]")));
    }
    Ok(match (on_lo, on_hi) {
        // Both rays: the whole line.
        (true, true) => grid_min(-reach, reach, h, |c| (gi + c).powi(2)),
        (true, false) => grid_min(0.0, reach, h, |s| (gi - s).powi(2)),
        (false, true) => grid_min(0.0, reach, h, |s| (gi + s).powi(2)),
        (false, false) => gi * gi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> VectorPoint {
        VectorPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_part_is_exact() {
        let part = MonotonePart::zero(2).unwrap();
        assert_eq!(
            brute_force_tangent(&part, &pt(&[1.0, 1.0]), &pt(&[3.0, 4.0]), 1e-4).unwrap(),
            5.0
        );
    }

    #[test]
    fn quadrant_example() {
        let q = MonotonePart::boxed(vec![0.0; 2], vec![f64::INFINITY; 2]).unwrap();
        let d = brute_force_tangent(&q, &pt(&[0.0, 1.0]), &pt(&[3.0, 2.0]), 1e-4).unwrap();
        assert!((d - 2.0).abs() <= 1e-4);
    }

    #[test]
    fn ball_boundary_matches_closed_form() {
        let ball = MonotonePart::ball(vec![0.0; 2], 1.0).unwrap();
        let z = pt(&[0.6, 0.8]);
        let g = pt(&[-1.0, 0.3]);
        let oracle = brute_force_tangent(&ball, &z, &g, 1e-4).unwrap();
        let closed = ball.cone_distance(&z, &g).unwrap();
        assert!((oracle - closed).abs() <= 1e-4);
    }

    #[test]
    fn rejects_large_dimension() {
        let part = MonotonePart::zero(5).unwrap();
        let z = pt(&[0.0; 5]);
        assert!(matches!(
            brute_force_tangent(&part, &z, &z, 1e-4),
            Err(Error::NotApplicable(_))
        ));
    }
}
