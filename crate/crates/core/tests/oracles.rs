//! Library routines against independent reference computations.

use pagd_core::analysis::brute_force_tangent;
use pagd_core::linalg::{power_iteration_norm, spectral_norm_exact, Matrix};
use pagd_core::{probe_lipschitz, probe_monotonicity, MonotoneField, MonotonePart, VectorPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Largest eigenvalue of the PSD matrix `g` by repeated squaring:
/// `lambda_max = lim trace(g^(2^k))^(1 / 2^k)`, with Frobenius
/// normalization at every step to stay in range.
fn top_eigenvalue_by_squaring(g: &Matrix) -> f64 {
    let n = g.rows();
    let mut cur = g.clone();
    let mut log_scale = 0.0;
    let mut weight = 1.0;
    for _ in 0..64 {
        let fro = cur.as_row_major().iter().map(|x| x * x).sum::<f64>().sqrt();
        if fro == 0.0 {
            return 0.0;
        }
        log_scale += weight * fro.ln();
        let data = cur.as_row_major().iter().map(|x| x / fro).collect();
        let normed = Matrix::from_row_major(n, n, data).unwrap();
        cur = normed.mul(&normed);
        weight *= 0.5;
    }
    let trace: f64 = (0..n).map(|i| cur.get(i, i)).sum();
    (log_scale + weight * trace.ln()).exp()
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let data = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_row_major(n, n, data).unwrap()
}

#[test]
fn power_iteration_matches_squaring_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=10 {
        for _ in 0..20 {
            let m = gaussian(&mut rng, n);
            let reference = top_eigenvalue_by_squaring(&m.transpose().mul(&m)).sqrt();
            let p = power_iteration_norm(&m, 1e-15, 200_000);
            assert!((p.norm - reference).abs() <= 1e-8 * reference.max(1.0), "n={n}: {} vs {reference}", p.norm);
            let exact = spectral_norm_exact(&m);
            assert!((exact - reference).abs() <= 1e-10 * reference.max(1.0), "n={n}");
        }
    }
}

#[test]
fn rotation_norm_is_one() {
    let f = MonotoneField::rotation(1.0).unwrap();
    assert!((top_eigenvalue_by_squaring(&f.matrix().transpose().mul(f.matrix())) - 1.0).abs() < 1e-12);
    let probe = probe_lipschitz(&f, 1000, 0, 100.0).unwrap();
    assert!(probe.pass && (probe.spectral_norm.unwrap() - 1.0).abs() < 1e-12);
    let mono = probe_monotonicity(&f, 1000, 0, 100.0).unwrap();
    assert!(mono.pass && mono.min_inner_product.abs() <= 1e-12 * 100.0 * 100.0);
}

#[test]
fn probes_flag_a_non_monotone_field() {
    let m = Matrix::from_row_major(2, 2, vec![-1.0, 0.0, 0.0, 1.0]).unwrap();
    let f = MonotoneField::linear(m, vec![0.0, 0.0], 1.0).unwrap();
    let probe = probe_monotonicity(&f, 1000, 0, 10.0).unwrap();
    assert!(!probe.pass && probe.min_inner_product < 0.0);
    let under = MonotoneField::rotation(1.0).unwrap().with_lipschitz(0.5).unwrap();
    assert!(!probe_lipschitz(&under, 1000, 0, 10.0).unwrap().pass);
}

#[test]
fn cone_distance_matches_grid_oracle() {
    let parts = [
        MonotonePart::boxed(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap(),
        MonotonePart::ball(vec![1.0, 0.0, 0.0], 0.5).unwrap(),
        MonotonePart::nonneg_orthant(3).unwrap(),
        MonotonePart::l1_scale(2, 0.4).unwrap(),
    ];
    // Hand-picked points on bounds and kinks.
    let points = [
        vec![0.0, 1.0],
        vec![1.5, 0.0, 0.0],
        vec![0.0, 2.0, 0.0],
        vec![0.0, -0.3],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (part, z) in parts.iter().zip(points) {
        let z = VectorPoint::new(z).unwrap();
        assert!(part.contains(&z));
        for _ in 0..50 {
            let g = VectorPoint::new((0..part.dim()).map(|_| rng.sample(StandardNormal)).collect()).unwrap();
            let closed = part.cone_distance(&z, &g).unwrap();
            let oracle = brute_force_tangent(part, &z, &g, 1e-4).unwrap();
            assert!((closed - oracle).abs() <= 1e-8, "{}: {closed} vs {oracle}", part.kind_name());
        }
    }
}
