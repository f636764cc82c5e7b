//! Built-in benchmark instances.
//!
//! Constrained instances are built around a chosen solution `z*`: the field
//! is `F(z) = M (z - z*) + delta (z - z*)` (or the saddle analogue with an
//! offset that cancels a chosen subgradient), so `z*` is known exactly and
//! the distance-based bounds can be audited.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::field::MonotoneField;
use crate::linalg::{self, Matrix};
use crate::part::MonotonePart;
use crate::point::VectorPoint;
use crate::problem::ProblemInstance;

pub const ROTATION_UNCONSTRAINED: &str = "rotation-unconstrained";
pub const BOX_LINEAR_50: &str = "box-linear-50";
pub const L1_SADDLE_20: &str = "l1-saddle-20";
pub const BALL_VI_10: &str = "ball-vi-10";

pub const BUILTIN_NAMES: [&str; 4] = [ROTATION_UNCONSTRAINED, BOX_LINEAR_50, L1_SADDLE_20, BALL_VI_10];

/// Multiplier applied to the computed spectral norm when declaring `L`.
const LIPSCHITZ_MARGIN: f64 = 1.0 + 1e-9;

/// Builds a named instance. `seed` drives the random ones.
pub fn builtin(name: &str, seed: u64) -> Result<ProblemInstance> {
    match name {
        ROTATION_UNCONSTRAINED => rotation_unconstrained(),
        BOX_LINEAR_50 => box_linear(50, seed),
        L1_SADDLE_20 => l1_saddle(10, 10, seed),
        BALL_VI_10 => ball_vi(10, seed),
        other => Err(Error::InvalidParameter(format!(
            "unknown builtin instance \"{other}\" (known: {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// `F(x, y) = (y, -x)` with `A = 0`, started at `(1, 0)`; `z* = 0`.
pub fn rotation_unconstrained() -> Result<ProblemInstance> {
    ProblemInstance::new(
        ROTATION_UNCONSTRAINED,
        MonotoneField::rotation(1.0)?,
        MonotonePart::zero(2)?,
        VectorPoint::new(vec![1.0, 0.0])?,
        Some(VectorPoint::new(vec![0.0, 0.0])?),
    )
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Matrix::from_row_major(rows, cols, data).expect("finite gaussian entries")
}

fn uniform(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// `0.5 B'B / n + (C - C') / (2 sqrt n) + delta I`: PSD symmetric part plus
/// a skew part, so the map is monotone (strongly, by `delta`).
fn random_monotone(rng: &mut ChaCha8Rng, n: usize, delta: f64) -> Matrix {
    let b = gaussian(rng, n, n, 1.0);
    let c = gaussian(rng, n, n, 1.0);
    let sym = b.gram();
    let mut m = Matrix::zeros(n, n);
    let skew_scale = 0.5 / (n as f64).sqrt();
    for i in 0..n {
        for j in 0..n {
            let v = 0.5 * sym.get(i, j) / n as f64 + skew_scale * (c.get(i, j) - c.get(j, i));
            m.set(i, j, v + if i == j { delta } else { 0.0 });
        }
    }
    m
}

/// `F(z) = M (z - z*)` through `offset = -M z*` (plus `extra`).
fn affine_around(m: &Matrix, z_star: &[f64], extra: Option<&[f64]>) -> Vec<f64> {
    let mz = m.mul_vec(z_star);
    mz.iter()
        .enumerate()
        .map(|(i, v)| -v - extra.map_or(0.0, |e| e[i]))
        .collect()
}

/// Box `[-1, 1]^d` with an interior solution and a start outside the box.
pub fn box_linear(dim: usize, seed: u64) -> Result<ProblemInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0c5_0050);
    let m = random_monotone(&mut rng, dim, 0.05);
    let z_star = uniform(&mut rng, dim, -0.5, 0.5);
    let start = uniform(&mut rng, dim, -3.0, 3.0);
    let lipschitz = linalg::spectral_norm_exact(&m) * LIPSCHITZ_MARGIN;
    let offset = affine_around(&m, &z_star, None);
    ProblemInstance::new(
        format!("box-linear-{dim}"),
        MonotoneField::custom_matrix(m, offset, lipschitz)?,
        MonotonePart::boxed(vec![-1.0; dim], vec![1.0; dim])?,
        VectorPoint::new(start)?,
        Some(VectorPoint::new(z_star)?),
    )
}

/// Regularized saddle problem
/// `min_x max_y 1/2 x'Px + x'Qy - 1/2 y'Ry + <a, (x, y)> + lambda ||x||_1 - lambda ||y||_1`
/// with a sparse solution.
pub fn l1_saddle(x_dim: usize, y_dim: usize, seed: u64) -> Result<ProblemInstance> {
    const LAMBDA: f64 = 0.1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11_5add1e);
    let psd = |rng: &mut ChaCha8Rng, n: usize| {
        let mut g = gaussian(rng, n, n, 1.0).gram();
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, 0.2 * g.get(i, j) / n as f64);
            }
        }
        g
    };
    let p = psd(&mut rng, x_dim);
    let r = psd(&mut rng, y_dim);
    let q = gaussian(&mut rng, x_dim, y_dim, 1.0 / (x_dim as f64).sqrt());
    let dim = x_dim + y_dim;

    // Half the coordinates of z* are zero; the subgradient there is strictly
    // inside [-lambda, lambda].
    let mut z_star = vec![0.0; dim];
    let mut sub = vec![0.0; dim];
    for i in 0..dim {
        if i % 2 == 0 {
            let mag: f64 = rng.random_range(0.2..1.0);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            z_star[i] = sign * mag;
            sub[i] = LAMBDA * sign;
        } else {
            sub[i] = rng.random_range(-0.8 * LAMBDA..0.8 * LAMBDA);
        }
    }
    let start = uniform(&mut rng, dim, -2.0, 2.0);

    let shape = MonotoneField::saddle_bilinear(p, q, r, vec![0.0; dim], 1.0)?;
    let m = shape.matrix().clone();
    let lipschitz = linalg::spectral_norm_exact(&m) * LIPSCHITZ_MARGIN;
    // F(z*) = -c* with c* in A(z*).
    let offset = affine_around(&m, &z_star, Some(&sub));
    let field = MonotoneField::saddle_bilinear(
        extract(&m, 0, 0, x_dim, x_dim),
        extract(&m, 0, x_dim, x_dim, y_dim),
        extract(&m, x_dim, x_dim, y_dim, y_dim),
        offset,
        lipschitz,
    )?;
    ProblemInstance::new(
        format!("l1-saddle-{dim}"),
        field,
        MonotonePart::product(vec![
            MonotonePart::l1_scale(x_dim, LAMBDA)?,
            MonotonePart::l1_scale(y_dim, LAMBDA)?,
        ])?,
        VectorPoint::new(start)?,
        Some(VectorPoint::new(z_star)?),
    )
}

fn extract(m: &Matrix, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out.set(i, j, m.get(r0 + i, c0 + j));
        }
    }
    out
}

/// Variational inequality over the unit ball with an interior solution and
/// a start at distance 3 from the center.
pub fn ball_vi(dim: usize, seed: u64) -> Result<ProblemInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xba11_0010);
    let m = random_monotone(&mut rng, dim, 0.02);
    let direction: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    let radius_star: f64 = rng.random_range(0.0..0.5);
    let z_star: Vec<f64> = direction.iter().map(|x| radius_star * x / norm).collect();
    let start_dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let start_norm = start_dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let start: Vec<f64> = start_dir.iter().map(|x| 3.0 * x / start_norm).collect();
    let lipschitz = linalg::spectral_norm_exact(&m) * LIPSCHITZ_MARGIN;
    let offset = affine_around(&m, &z_star, None);
    ProblemInstance::new(
        format!("ball-vi-{dim}"),
        MonotoneField::custom_matrix(m, offset, lipschitz)?,
        MonotonePart::ball(vec![0.0; dim], 1.0)?,
        VectorPoint::new(start)?,
        Some(VectorPoint::new(z_star)?),
    )
}
