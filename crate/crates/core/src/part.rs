//! The maximally monotone set-valued part `A`, handled through its
//! resolvent `J_{aA} = (Id + aA)^{-1}`, membership tests for `c in A(z)`,
//! and the distance `min_{c in A(z)} ||g + c||`.
//!
//! Normal-cone kinds (box, ball, orthant) have projections as resolvents;
//! the l1 kind is the subdifferential of `lambda * ||.||_1` and resolves by
//! soft-thresholding.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::point::VectorPoint;

/// Slack below which a certificate counts as a member of `A(z)`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Whether `x` sits on `bound` for active-set purposes.
pub fn at_bound(x: f64, bound: f64) -> bool {
    bound.is_finite() && (x - bound).abs() <= 1e-12 * (1.0 + bound.abs())
}

/// A built-in maximally monotone operator.
#[derive(Clone, Debug, PartialEq)]
pub enum MonotonePart {
    /// `A = 0`.
    Zero { dim: usize },
    /// Normal cone of `{z : lower <= z <= upper}`; infinite bounds allowed.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Normal cone of a closed Euclidean ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// Normal cone of `{z : z >= 0}`.
    NonnegOrthant { dim: usize },
    /// Subdifferential of `lambda * ||z||_1`.
    L1Scale { dim: usize, lambda: f64 },
    /// Cartesian product, blocks in order.
    Product(Vec<MonotonePart>),
}

impl MonotonePart {
    pub fn zero(dim: usize) -> Result<Self> {
        positive_dim(dim)?;
        Ok(Self::Zero { dim })
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        positive_dim(lower.len())?;
        check_dim(lower.len(), upper.len())?;
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if lo.is_nan() || hi.is_nan() || *lo == f64::INFINITY || *hi == f64::NEG_INFINITY {
                return Err(Error::InvalidParameter(format!(
                    "box bounds at coordinate {i} are invalid ({lo}, {hi})"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidParameter(format!(
                    "box lower bound exceeds upper bound at coordinate {i} ({lo} > {hi})"
                )));
            }
        }
        Ok(Self::Box { lower, upper })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        positive_dim(center.len())?;
        if center.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("ball center must be finite".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self::Ball { center, radius })
    }

    pub fn nonneg_orthant(dim: usize) -> Result<Self> {
        positive_dim(dim)?;
        Ok(Self::NonnegOrthant { dim })
    }

    pub fn l1_scale(dim: usize, lambda: f64) -> Result<Self> {
        positive_dim(dim)?;
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "l1 weight must be positive, got {lambda}"
            )));
        }
        Ok(Self::L1Scale { dim, lambda })
    }

    pub fn product(parts: Vec<MonotonePart>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("product needs at least one block".into()));
        }
        Ok(Self::Product(parts))
    }

    /// Short kind name, as used in descriptors.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Zero { .. } => "zero",
            Self::Box { .. } => "box",
            Self::Ball { .. } => "ball",
            Self::NonnegOrthant { .. } => "nonneg-orthant",
            Self::L1Scale { .. } => "l1-scale",
            Self::Product(_) => "product",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Zero { dim } | Self::NonnegOrthant { dim } | Self::L1Scale { dim, .. } => *dim,
            Self::Box { lower, .. } => lower.len(),
            Self::Ball { center, .. } => center.len(),
            Self::Product(parts) => parts.iter().map(Self::dim).sum(),
        }
    }

    /// Every built-in kind has a closed-form `cone_distance`.
    pub fn supports_cone_distance(&self) -> bool {
        true
    }

    /// `J_{alpha A}(w)`: the unique `z` with `(w - z) / alpha in A(z)`.
    pub fn resolvent(&self, alpha: f64, w: &VectorPoint) -> Result<VectorPoint> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "resolvent step must be positive, got {alpha}"
            )));
        }
        check_dim(self.dim(), w.dim())?;
        let mut out = w.as_slice().to_vec();
        self.resolve_into(alpha, &mut out);
        Ok(VectorPoint::from_raw(out))
    }

    pub(crate) fn resolve_unchecked(&self, alpha: f64, w: VectorPoint) -> VectorPoint {
        if let Self::Zero { .. } = self {
            return w;
        }
        let mut out = w.into_vec();
        self.resolve_into(alpha, &mut out);
        VectorPoint::from_raw(out)
    }

    fn resolve_into(&self, alpha: f64, w: &mut [f64]) {
        match self {
            Self::Zero { .. } => {}
            Self::Box { lower, upper } => {
                for ((x, lo), hi) in w.iter_mut().zip(lower).zip(upper) {
                    *x = x.max(*lo).min(*hi);
                }
            }
            Self::NonnegOrthant { .. } => {
                for x in w.iter_mut() {
                    *x = x.max(0.0);
                }
            }
            Self::Ball { center, radius } => {
                let dist = w
                    .iter()
                    .zip(center)
                    .map(|(x, c)| (x - c) * (x - c))
                    .sum::<f64>()
                    .sqrt();
                if dist > *radius {
                    let s = radius / dist;
                    for (x, c) in w.iter_mut().zip(center) {
                        *x = c + s * (*x - c);
                    }
                }
            }
            Self::L1Scale { lambda, .. } => {
                let thr = alpha * lambda;
                for x in w.iter_mut() {
                    *x = if *x > thr {
                        *x - thr
                    } else if *x < -thr {
                        *x + thr
                    } else {
                        0.0
                    };
                }
            }
            Self::Product(parts) => {
                let mut start = 0;
                for p in parts {
                    let end = start + p.dim();
                    p.resolve_into(alpha, &mut w[start..end]);
                    start = end;
                }
            }
        }
    }

    /// Violation of `c in A(z)`: zero for members, positive otherwise,
    /// `+inf` when `z` is outside the domain of `A`.
    pub fn membership_slack(&self, z: &VectorPoint, c: &VectorPoint) -> Result<f64> {
        check_dim(self.dim(), z.dim())?;
        check_dim(self.dim(), c.dim())?;
        Ok(self.slack_of(z.as_slice(), c.as_slice()))
    }

    fn slack_of(&self, z: &[f64], c: &[f64]) -> f64 {
        match self {
            Self::Zero { .. } => c.iter().fold(0.0, |m, x| m.max(x.abs())),
            Self::Box { lower, upper } => box_slack(z, c, lower.iter().copied(), upper.iter().copied()),
            Self::NonnegOrthant { dim } => box_slack(
                z,
                c,
                std::iter::repeat_n(0.0, *dim),
                std::iter::repeat_n(f64::INFINITY, *dim),
            ),
            Self::Ball { center, radius } => {
                let v: Vec<f64> = z.iter().zip(center).map(|(a, b)| a - b).collect();
                let dist = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if dist > radius + 1e-12 * (1.0 + radius) {
                    f64::INFINITY
                } else if (dist - radius).abs() <= 1e-12 * (1.0 + radius) {
                    // Normal cone is the ray {mu * v : mu >= 0}.
                    let vn2 = dist * dist;
                    let mu = (c.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / vn2).max(0.0);
                    c.iter()
                        .zip(&v)
                        .map(|(a, b)| (a - mu * b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                } else {
                    c.iter().map(|x| x * x).sum::<f64>().sqrt()
                }
            }
            Self::L1Scale { lambda, .. } => z.iter().zip(c).fold(0.0, |m, (zi, ci)| {
                let v = if *zi == 0.0 {
                    (ci.abs() - lambda).max(0.0)
                } else {
                    (ci - lambda * zi.signum()).abs()
                };
                m.max(v)
            }),
            Self::Product(parts) => {
                let mut start = 0;
                let mut worst: f64 = 0.0;
                for p in parts {
                    let end = start + p.dim();
                    worst = worst.max(p.slack_of(&z[start..end], &c[start..end]));
                    start = end;
                }
                worst
            }
        }
    }

    /// `min_{c in A(z)} ||g + c||`, i.e. `dist(-g, A(z))`, in closed form.
    pub fn cone_distance(&self, z: &VectorPoint, g: &VectorPoint) -> Result<f64> {
        check_dim(self.dim(), z.dim())?;
        check_dim(self.dim(), g.dim())?;
        Ok(self.cone_distance_sq(z.as_slice(), g.as_slice())?.sqrt())
    }

    fn cone_distance_sq(&self, z: &[f64], g: &[f64]) -> Result<f64> {
        match self {
            Self::Zero { .. } => Ok(g.iter().map(|x| x * x).sum()),
            Self::Box { lower, upper } => {
                box_distance_sq(z, g, lower.iter().copied(), upper.iter().copied())
            }
            Self::NonnegOrthant { dim } => box_distance_sq(
                z,
                g,
                std::iter::repeat_n(0.0, *dim),
                std::iter::repeat_n(f64::INFINITY, *dim),
            ),
            Self::Ball { center, radius } => {
                let v: Vec<f64> = z.iter().zip(center).map(|(a, b)| a - b).collect();
                let dist = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if dist > radius + 1e-12 * (1.0 + radius) {
                    return Err(Error::Domain(format!(
                        "point at distance {dist} from the center of a ball of radius {radius}"
                    )));
                }
                if (dist - radius).abs() > 1e-12 * (1.0 + radius) {
                    return Ok(g.iter().map(|x| x * x).sum());
                }
                // Project -g onto the ray {mu * v : mu >= 0}.
                let mu = (-g.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / (dist * dist)).max(0.0);
                Ok(g.iter().zip(&v).map(|(a, b)| (a + mu * b).powi(2)).sum())
            }
            Self::L1Scale { lambda, .. } => Ok(z
                .iter()
                .zip(g)
                .map(|(zi, gi)| {
                    if *zi == 0.0 {
                        (gi.abs() - lambda).max(0.0).powi(2)
                    } else {
                        (gi + lambda * zi.signum()).powi(2)
                    }
                })
                .sum()),
            Self::Product(parts) => {
                let mut start = 0;
                let mut total = 0.0;
                for p in parts {
                    let end = start + p.dim();
                    total += p.cone_distance_sq(&z[start..end], &g[start..end])?;
                    start = end;
                }
                Ok(total)
            }
        }
    }

    /// Whether `z` lies in the domain of `A` (where `A(z)` is nonempty).
    pub fn contains(&self, z: &VectorPoint) -> bool {
        z.dim() == self.dim() && self.slack_of(z.as_slice(), &vec![0.0; z.dim()]).is_finite()
    }
}

fn positive_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidParameter("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn box_slack(
    z: &[f64],
    c: &[f64],
    lower: impl Iterator<Item = f64>,
    upper: impl Iterator<Item = f64>,
) -> f64 {
    let mut worst: f64 = 0.0;
    for (((zi, ci), lo), hi) in z.iter().zip(c).zip(lower).zip(upper) {
        let on_lo = at_bound(*zi, lo);
        let on_hi = at_bound(*zi, hi);
        if (!on_lo && *zi < lo) || (!on_hi && *zi > hi) {
            return f64::INFINITY;
        }
        let v = match (on_lo, on_hi) {
            (true, true) => 0.0,
            (true, false) => ci.max(0.0),
            (false, true) => (-ci).max(0.0),
            (false, false) => ci.abs(),
        };
        worst = worst.max(v);
    }
    worst
}

fn box_distance_sq(
    z: &[f64],
    g: &[f64],
    lower: impl Iterator<Item = f64>,
    upper: impl Iterator<Item = f64>,
) -> Result<f64> {
    let mut total = 0.0;
    for (i, (((zi, gi), lo), hi)) in z.iter().zip(g).zip(lower).zip(upper).enumerate() {
        let on_lo = at_bound(*zi, lo);
        let on_hi = at_bound(*zi, hi);
        if (!on_lo && *zi < lo) || (!on_hi && *zi > hi) {
            return Err(Error::Domain(format!(
                "coordinate {i} = {zi} outside [{lo}, {hi}]"
            )));
        }
        total += match (on_lo, on_hi) {
            (true, true) => 0.0,
            // c_i <= 0 can cancel a nonnegative g_i.
            (true, false) => {
                if *gi >= 0.0 {
                    0.0
                } else {
                    gi * gi
                }
            }
            (false, true) => {
                if *gi <= 0.0 {
                    0.0
                } else {
                    gi * gi
                }
            }
            (false, false) => gi * gi,
        };
    }
    Ok(total)
}

/// A candidate element `c in A(z)` with its membership slack.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeCertificate {
    pub point: VectorPoint,
    pub element: VectorPoint,
    pub slack: f64,
}

impl ConeCertificate {
    pub fn new(part: &MonotonePart, point: VectorPoint, element: VectorPoint) -> Result<Self> {
        let slack = part.membership_slack(&point, &element)?;
        Ok(Self {
            point,
            element,
            slack,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.slack <= MEMBERSHIP_TOL
    }
}

/// A box bound in descriptors: a number or one of the strings
/// `"inf"` / `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundValue {
    Number(f64),
    Text(InfinityText),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinityText {
    #[serde(rename = "inf")]
    Inf,
    #[serde(rename = "-inf")]
    NegInf,
}

impl From<BoundValue> for f64 {
    fn from(b: BoundValue) -> f64 {
        match b {
            BoundValue::Number(x) => x,
            BoundValue::Text(InfinityText::Inf) => f64::INFINITY,
            BoundValue::Text(InfinityText::NegInf) => f64::NEG_INFINITY,
        }
    }
}

impl From<f64> for BoundValue {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            Self::Text(InfinityText::Inf)
        } else if x == f64::NEG_INFINITY {
            Self::Text(InfinityText::NegInf)
        } else {
            Self::Number(x)
        }
    }
}

/// JSON descriptor of a [`MonotonePart`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PartDescriptor {
    Zero {
        dim: usize,
    },
    Box {
        lower: Vec<BoundValue>,
        upper: Vec<BoundValue>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    NonnegOrthant {
        dim: usize,
    },
    L1Scale {
        dim: usize,
        lambda: f64,
    },
    Product {
        dims: Vec<usize>,
        parts: Vec<PartDescriptor>,
    },
}

impl TryFrom<&PartDescriptor> for MonotonePart {
    type Error = Error;

    fn try_from(d: &PartDescriptor) -> Result<Self> {
        match d {
            PartDescriptor::Zero { dim } => Self::zero(*dim),
            PartDescriptor::Box { lower, upper } => Self::boxed(
                lower.iter().copied().map(f64::from).collect(),
                upper.iter().copied().map(f64::from).collect(),
            ),
            PartDescriptor::Ball { center, radius } => Self::ball(center.clone(), *radius),
            PartDescriptor::NonnegOrthant { dim } => Self::nonneg_orthant(*dim),
            PartDescriptor::L1Scale { dim, lambda } => Self::l1_scale(*dim, *lambda),
            PartDescriptor::Product { dims, parts } => {
                if dims.len() != parts.len() {
                    return Err(Error::Schema(format!(
                        "product lists {} dims for {} parts",
                        dims.len(),
                        parts.len()
                    )));
                }
                let parts = parts
                    .iter()
                    .zip(dims)
                    .map(|(p, &dim)| {
                        let part = Self::try_from(p)?;
                        if part.dim() != dim {
                            return Err(Error::Schema(format!(
                                "product block declares dim {dim} but has dim {}",
                                part.dim()
                            )));
                        }
                        Ok(part)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::product(parts)
            }
        }
    }
}

impl From<&MonotonePart> for PartDescriptor {
    fn from(p: &MonotonePart) -> Self {
        match p {
            MonotonePart::Zero { dim } => Self::Zero { dim: *dim },
            MonotonePart::Box { lower, upper } => Self::Box {
                lower: lower.iter().copied().map(BoundValue::from).collect(),
                upper: upper.iter().copied().map(BoundValue::from).collect(),
            },
            MonotonePart::Ball { center, radius } => Self::Ball {
                center: center.clone(),
                radius: *radius,
            },
            MonotonePart::NonnegOrthant { dim } => Self::NonnegOrthant { dim: *dim },
            MonotonePart::L1Scale { dim, lambda } => Self::L1Scale {
                dim: *dim,
                lambda: *lambda,
            },
            MonotonePart::Product(parts) => Self::Product {
                dims: parts.iter().map(MonotonePart::dim).collect(),
                parts: parts.iter().map(Self::from).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> VectorPoint {
        VectorPoint::new(v.to_vec()).unwrap()
    }

    fn unit_box() -> MonotonePart {
        MonotonePart::boxed(vec![-1.0; 2], vec![1.0; 2]).unwrap()
    }

    fn upper_quadrant() -> MonotonePart {
        MonotonePart::boxed(vec![0.0; 2], vec![f64::INFINITY; 2]).unwrap()
    }

    #[test]
    fn resolvent_examples() {
        for alpha in [0.1, 1.0, 7.0] {
            assert_eq!(unit_box().resolvent(alpha, &pt(&[2.0, 0.5])).unwrap(), pt(&[1.0, 0.5]));
        }
        let zero = MonotonePart::zero(2).unwrap();
        assert_eq!(zero.resolvent(0.3, &pt(&[4.0, -7.0])).unwrap(), pt(&[4.0, -7.0]));

        let l1 = MonotonePart::l1_scale(3, 1.0).unwrap();
        assert_eq!(
            l1.resolvent(0.5, &pt(&[2.0, -0.2, 0.0])).unwrap(),
            pt(&[1.5, 0.0, 0.0])
        );

        let ball = MonotonePart::ball(vec![0.0; 2], 1.0).unwrap();
        let z = ball.resolvent(2.0, &pt(&[3.0, 4.0])).unwrap();
        assert!((z[0] - 0.6).abs() < 1e-15 && (z[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn resolvent_rejects_bad_step() {
        assert!(unit_box().resolvent(0.0, &pt(&[0.0, 0.0])).is_err());
        assert!(unit_box().resolvent(-1.0, &pt(&[0.0, 0.0])).is_err());
        assert!(unit_box().resolvent(1.0, &pt(&[0.0])).is_err());
    }

    #[test]
    fn product_resolves_blockwise() {
        let p = MonotonePart::product(vec![
            MonotonePart::nonneg_orthant(1).unwrap(),
            MonotonePart::l1_scale(2, 1.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(
            p.resolvent(1.0, &pt(&[-3.0, 3.0, -0.5])).unwrap(),
            pt(&[0.0, 2.0, 0.0])
        );
    }

    #[test]
    fn membership_slack_examples() {
        let q = upper_quadrant();
        assert_eq!(q.membership_slack(&pt(&[0.0, 1.0]), &pt(&[-5.0, 0.0])).unwrap(), 0.0);
        assert_eq!(q.membership_slack(&pt(&[0.0, 1.0]), &pt(&[0.0, 3.0])).unwrap(), 3.0);
        // Outside the domain.
        assert_eq!(
            q.membership_slack(&pt(&[-1.0, 1.0]), &pt(&[0.0, 0.0])).unwrap(),
            f64::INFINITY
        );
        // d(2 |x1| + 2 |x2|) at (1.5, 0) is {2} x [-2, 2].
        let l1 = MonotonePart::l1_scale(2, 2.0).unwrap();
        assert_eq!(l1.membership_slack(&pt(&[1.5, 0.0]), &pt(&[2.0, -1.0])).unwrap(), 0.0);
        assert_eq!(l1.membership_slack(&pt(&[1.5, 0.0]), &pt(&[2.0, -3.0])).unwrap(), 1.0);
    }

    #[test]
    fn ball_membership_on_boundary_uses_ray() {
        let ball = MonotonePart::ball(vec![0.0; 2], 1.0).unwrap();
        let z = pt(&[0.6, 0.8]);
        assert_eq!(ball.membership_slack(&z, &pt(&[1.2, 1.6])).unwrap(), 0.0);
        assert!(ball.membership_slack(&z, &pt(&[-0.6, -0.8])).unwrap() > 0.9);
        assert_eq!(ball.membership_slack(&pt(&[0.1, 0.0]), &pt(&[0.0, 0.5])).unwrap(), 0.5);
    }

    #[test]
    fn cone_distance_examples() {
        let zero = MonotonePart::zero(2).unwrap();
        assert_eq!(zero.cone_distance(&pt(&[9.0, 9.0]), &pt(&[3.0, 4.0])).unwrap(), 5.0);

        let q = upper_quadrant();
        assert_eq!(q.cone_distance(&pt(&[0.0, 1.0]), &pt(&[3.0, 2.0])).unwrap(), 2.0);
        let d = q.cone_distance(&pt(&[0.0, 1.0]), &pt(&[-3.0, 2.0])).unwrap();
        assert!((d - 13f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cone_distance_outside_domain_is_error() {
        let q = upper_quadrant();
        assert!(matches!(
            q.cone_distance(&pt(&[-1.0, 1.0]), &pt(&[0.0, 0.0])),
            Err(Error::Domain(_))
        ));
        let ball = MonotonePart::ball(vec![0.0; 2], 1.0).unwrap();
        assert!(ball.cone_distance(&pt(&[2.0, 0.0]), &pt(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn ball_boundary_distance() {
        let ball = MonotonePart::ball(vec![0.0; 2], 1.0).unwrap();
        let z = pt(&[1.0, 0.0]);
        // -g = (2, 1) projects onto the ray along (1, 0) at (2, 0).
        assert_eq!(ball.cone_distance(&z, &pt(&[-2.0, -1.0])).unwrap(), 1.0);
        // -g points inward: best c is zero.
        assert_eq!(ball.cone_distance(&z, &pt(&[3.0, 4.0])).unwrap(), 5.0);
    }

    #[test]
    fn invalid_parts_rejected() {
        assert!(MonotonePart::boxed(vec![1.0], vec![0.0]).is_err());
        assert!(MonotonePart::ball(vec![0.0], 0.0).is_err());
        assert!(MonotonePart::l1_scale(2, -1.0).is_err());
        assert!(MonotonePart::zero(0).is_err());
        assert!(MonotonePart::product(vec![]).is_err());
    }

    #[test]
    fn degenerate_box_coordinate_accepts_any_element() {
        let b = MonotonePart::boxed(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(b.membership_slack(&pt(&[1.0]), &pt(&[-42.0])).unwrap(), 0.0);
        assert_eq!(b.cone_distance(&pt(&[1.0]), &pt(&[42.0])).unwrap(), 0.0);
    }

    #[test]
    fn descriptor_parses_infinity_strings() {
        let json = r#"{"kind": "box", "lower": [0, "-inf"], "upper": ["inf", 2.5]}"#;
        let d: PartDescriptor = serde_json::from_str(json).unwrap();
        let part = MonotonePart::try_from(&d).unwrap();
        assert_eq!(
            part,
            MonotonePart::Box {
                lower: vec![0.0, f64::NEG_INFINITY],
                upper: vec![f64::INFINITY, 2.5]
            }
        );
        let back = serde_json::to_value(PartDescriptor::from(&part)).unwrap();
        assert_eq!(back["upper"][0], "inf");
    }

    #[test]
    fn product_descriptor_checks_dims() {
        let json = r#"{"kind": "product", "dims": [2, 1],
            "parts": [{"kind": "l1-scale", "dim": 2, "lambda": 0.5}, {"kind": "zero", "dim": 1}]}"#;
        let d: PartDescriptor = serde_json::from_str(json).unwrap();
        assert_eq!(MonotonePart::try_from(&d).unwrap().dim(), 3);

        let bad = json.replace("[2, 1]", "[1, 1]");
        let d: PartDescriptor = serde_json::from_str(&bad).unwrap();
        assert!(MonotonePart::try_from(&d).is_err());
    }
}
