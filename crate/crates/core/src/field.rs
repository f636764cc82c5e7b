//! The single-valued monotone operator `F` and probes for its standing
//! assumptions (monotonicity and Lipschitz continuity).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};
use crate::point::VectorPoint;

/// Rejection threshold on `lambda_min(M + M^T)` for checked kinds.
pub const MONOTONE_EIGEN_TOL: f64 = 1e-10;

/// Which family a field belongs to. Every built-in family is affine,
/// `F(z) = M z + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FieldKind {
    Linear,
    /// `(grad_x Phi, -grad_y Phi)` of
    /// `Phi(x, y) = 1/2 x'Px + x'Qy - 1/2 y'Ry`, plus an affine offset.
    SaddleBilinear { x_dim: usize, y_dim: usize },
    /// `F(x, y) = (y, -x)`.
    Rotation,
    CustomMatrix,
}

/// An affine monotone field with a user-declared Lipschitz constant.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneField {
    kind: FieldKind,
    matrix: Matrix,
    offset: Vec<f64>,
    lipschitz: f64,
}

impl MonotoneField {
    /// `F(z) = M z + b`. Monotonicity is not enforced here; use
    /// [`probe_monotonicity`] or [`MonotoneField::custom_matrix`] for a
    /// checked construction.
    pub fn linear(matrix: Matrix, offset: Vec<f64>, lipschitz: f64) -> Result<Self> {
        Self::build(FieldKind::Linear, matrix, offset, lipschitz)
    }

    /// Like [`MonotoneField::linear`] but rejects matrices whose symmetric
    /// part has an eigenvalue below `-1e-10`.
    pub fn custom_matrix(matrix: Matrix, offset: Vec<f64>, lipschitz: f64) -> Result<Self> {
        let field = Self::build(FieldKind::CustomMatrix, matrix, offset, lipschitz)?;
        let min_eigenvalue = linalg::min_symmetric_eigenvalue(&field.matrix);
        if min_eigenvalue < -MONOTONE_EIGEN_TOL {
            return Err(Error::NotMonotone { min_eigenvalue });
        }
        Ok(field)
    }

    /// The two-dimensional rotation field `(y, -x)`.
    pub fn rotation(lipschitz: f64) -> Result<Self> {
        let m = Matrix::from_row_major(2, 2, vec![0.0, 1.0, -1.0, 0.0])?;
        Self::build(FieldKind::Rotation, m, vec![0.0, 0.0], lipschitz)
    }

    /// Saddle field of `1/2 x'Px + x'Qy - 1/2 y'Ry` with `P`, `R` positive
    /// semidefinite; `offset` is added to the stacked `(x, y)` output.
    pub fn saddle_bilinear(
        p: Matrix,
        q: Matrix,
        r: Matrix,
        offset: Vec<f64>,
        lipschitz: f64,
    ) -> Result<Self> {
        let n = p.rows();
        let m = r.rows();
        if !p.is_square() || !r.is_square() || q.rows() != n || q.cols() != m {
            return Err(Error::InvalidParameter(format!(
                "saddle blocks have incompatible shapes: P {}x{}, Q {}x{}, R {}x{}",
                p.rows(),
                p.cols(),
                q.rows(),
                q.cols(),
                r.rows(),
                r.cols()
            )));
        }
        for (name, block) in [("P", &p), ("R", &r)] {
            let sym = block.symmetric_sum();
            let min_eigenvalue = linalg::symmetric_eigenvalues(&sym)[0] / 2.0;
            if min_eigenvalue < -MONOTONE_EIGEN_TOL {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive semidefinite (min eigenvalue {min_eigenvalue:e})"
                )));
            }
        }
        let d = n + m;
        let mut full = Matrix::zeros(d, d);
        for i in 0..n {
            for j in 0..n {
                full.set(i, j, p.get(i, j));
            }
            for j in 0..m {
                full.set(i, n + j, q.get(i, j));
                full.set(n + j, i, -q.get(i, j));
            }
        }
        for i in 0..m {
            for j in 0..m {
                full.set(n + i, n + j, r.get(i, j));
            }
        }
        Self::build(
            FieldKind::SaddleBilinear {
                x_dim: n,
                y_dim: m,
            },
            full,
            offset,
            lipschitz,
        )
    }

    fn build(kind: FieldKind, matrix: Matrix, offset: Vec<f64>, lipschitz: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidParameter(format!(
                "field matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        check_dim(matrix.rows(), offset.len())?;
        if offset.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("offset must be finite".into()));
        }
        if !(lipschitz.is_finite() && lipschitz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Lipschitz constant must be positive and finite, got {lipschitz}"
            )));
        }
        Ok(Self {
            kind,
            matrix,
            offset,
            lipschitz,
        })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// Same field with a different declared constant.
    pub fn with_lipschitz(&self, lipschitz: f64) -> Result<Self> {
        Self::build(
            self.kind.clone(),
            self.matrix.clone(),
            self.offset.clone(),
            lipschitz,
        )
    }

    /// `F(z)`.
    pub fn evaluate(&self, z: &VectorPoint) -> Result<VectorPoint> {
        check_dim(self.dim(), z.dim())?;
        Ok(self.apply(z))
    }

    /// `F(z)` without the dimension check; callers guarantee it.
    pub(crate) fn apply(&self, z: &VectorPoint) -> VectorPoint {
        let mut out = self.matrix.mul_vec(z.as_slice());
        for (o, b) in out.iter_mut().zip(&self.offset) {
            *o += b;
        }
        VectorPoint::from_raw(out)
    }
}

/// Outcome of [`probe_monotonicity`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityProbe {
    pub min_inner_product: f64,
    pub pass: bool,
}

/// Outcome of [`probe_lipschitz`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzProbe {
    pub max_ratio: f64,
    /// Power-iteration estimate of `||M||_2`.
    pub spectral_norm: Option<f64>,
    pub pass: bool,
}

/// Default sample count for the probes.
pub const DEFAULT_PROBE_SAMPLES: usize = 10_000;
/// Default sampling radius for the probes.
pub const DEFAULT_PROBE_RADIUS: f64 = 100.0;

fn sample_ball(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> VectorPoint {
    loop {
        let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = dir.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            continue;
        }
        let u: f64 = rng.random();
        let r = radius * u.powf(1.0 / dim as f64);
        return VectorPoint::from_raw(dir.into_iter().map(|x| r * x / n).collect());
    }
}

fn sample_pair(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> (VectorPoint, VectorPoint) {
    loop {
        let z = sample_ball(rng, dim, radius);
        let w = sample_ball(rng, dim, radius);
        if z != w {
            return (z, w);
        }
    }
}

fn check_probe_args(samples: usize, radius: f64) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    Ok(())
}

/// Samples pairs in a ball and reports the smallest
/// `<F(z) - F(w), z - w>`. Passing is evidence, not proof.
pub fn probe_monotonicity(
    field: &MonotoneField,
    samples: usize,
    seed: u64,
    radius: f64,
) -> Result<MonotonicityProbe> {
    check_probe_args(samples, radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_inner_product = f64::INFINITY;
    let mut pass = true;
    for _ in 0..samples {
        let (z, w) = sample_pair(&mut rng, field.dim(), radius);
        let diff = z.sub(&w);
        let ip = field.apply(&z).sub(&field.apply(&w)).dot(&diff);
        min_inner_product = min_inner_product.min(ip);
        if ip < -1e-9 * (1.0 + diff.norm_squared()) {
            pass = false;
        }
    }
    Ok(MonotonicityProbe {
        min_inner_product,
        pass,
    })
}

/// Samples pairs in a ball and reports the largest difference quotient,
/// together with a power-iteration estimate of `||M||_2`.
pub fn probe_lipschitz(
    field: &MonotoneField,
    samples: usize,
    seed: u64,
    radius: f64,
) -> Result<LipschitzProbe> {
    check_probe_args(samples, radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio: f64 = 0.0;
    for _ in 0..samples {
        let (z, w) = sample_pair(&mut rng, field.dim(), radius);
        let ratio = field.apply(&z).distance(&field.apply(&w)) / z.distance(&w);
        max_ratio = max_ratio.max(ratio);
    }
    let limit = field.lipschitz() * (1.0 + 1e-9);
    let spectral = linalg::power_iteration_norm(field.matrix(), 1e-10, 10_000).norm;
    Ok(LipschitzProbe {
        max_ratio,
        spectral_norm: Some(spectral),
        pass: max_ratio <= limit && spectral <= limit,
    })
}
