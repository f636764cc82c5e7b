use pagd_core::analysis::{natural_residual, tangent_residual};
use pagd_core::{run, Method, MonotoneField, MonotonePart, ProblemInstance, RunOptions, StepSchedule, VectorPoint};
use proptest::prelude::*;

fn part_strategy(dim: usize) -> impl Strategy<Value = MonotonePart> {
    let bounds = prop::collection::vec((-3.0f64..3.0, 0.0f64..3.0), dim);
    prop_oneof![
        Just(MonotonePart::zero(dim).unwrap()),
        bounds.prop_map(|b| {
            let lower = b.iter().map(|(l, _)| *l).collect();
            let upper = b.iter().map(|(l, w)| l + w).collect();
            MonotonePart::boxed(lower, upper).unwrap()
        }),
        (prop::collection::vec(-2.0f64..2.0, dim), 0.1f64..3.0)
            .prop_map(|(c, r)| MonotonePart::ball(c, r).unwrap()),
        Just(MonotonePart::nonneg_orthant(dim).unwrap()),
        (0.0f64..2.0).prop_map(move |l| MonotonePart::l1_scale(dim, l).unwrap()),
    ]
}

fn point(dim: usize) -> impl Strategy<Value = VectorPoint> {
    prop::collection::vec(-20.0f64..20.0, dim).prop_map(|v| VectorPoint::new(v).unwrap())
}

fn case() -> impl Strategy<Value = (MonotonePart, f64, VectorPoint, VectorPoint)> {
    (1usize..6).prop_flat_map(|d| (part_strategy(d), 1e-3f64..10.0, point(d), point(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn resolvent_is_nonexpansive((part, alpha, w1, w2) in case()) {
        let z1 = part.resolvent(alpha, &w1).unwrap();
        let z2 = part.resolvent(alpha, &w2).unwrap();
        prop_assert!(z1.distance(&z2) <= w1.distance(&w2) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn resolvent_certificate_is_member((part, alpha, w, _unused) in case()) {
        let z = part.resolvent(alpha, &w).unwrap();
        prop_assert!(part.contains(&z));
        let c = w.sub(&z).scale(1.0 / alpha);
        prop_assert!(part.membership_slack(&z, &c).unwrap() <= 1e-9);
    }

    #[test]
    fn cone_distance_vanishes_on_members((part, alpha, w, _unused) in case()) {
        // -c with c in A(z) must give distance zero.
        let z = part.resolvent(alpha, &w).unwrap();
        let c = w.sub(&z).scale(1.0 / alpha);
        let g = c.scale(-1.0);
        prop_assert!(part.cone_distance(&z, &g).unwrap() <= 1e-9 * (1.0 + c.norm()));
    }

    #[test]
    fn natural_below_tangent((part, _alpha, w, b) in case()) {
        let d = part.dim();
        let field = MonotoneField::linear(
            pagd_core::linalg::Matrix::identity(d),
            b.into_vec(),
            1.0,
        ).unwrap();
        let z = part.resolvent(1.0, &w).unwrap();
        let problem = ProblemInstance::new("prop", field, part, z.clone(), None).unwrap();
        let nat = natural_residual(&problem, &z).unwrap();
        let tan = tangent_residual(&problem, &z).unwrap();
        prop_assert!(nat <= tan + 1e-9);
    }

    #[test]
    fn schedule_is_exact(gamma in 2.0f64..50.0, l in 1e-3f64..1e3, t in 0u64..10_000_000) {
        let s = StepSchedule::new(gamma, l).unwrap();
        let (a, b) = s.step(t);
        let x = t as f64 + gamma;
        prop_assert_eq!(a, 1.0 / (l * x.sqrt()));
        prop_assert_eq!(b, gamma / x);
        prop_assert!(b > 0.0 && b <= 1.0);
    }
}

#[test]
fn anchored_fixed_point_is_fixed() {
    // Starting at the solution, every P-AGD iterate stays there.
    let problem = pagd_core::instances::builtin("box-linear-50", 3).unwrap();
    let z_star = problem.known_solution().unwrap().clone();
    let problem = problem.with_start(z_star.clone()).unwrap();
    let sched = StepSchedule::new(2.0, problem.lipschitz()).unwrap();
    let trace = run(&problem, &Method::ProximalAnchored(sched), 500, &RunOptions::default()).unwrap();
    for r in &trace.records {
        assert!(r.z.distance(&z_star) <= 1e-12, "t={}", r.t);
    }
}

#[test]
fn runs_are_deterministic() {
    for name in pagd_core::instances::BUILTIN_NAMES {
        let a = pagd_core::instances::builtin(name, 11).unwrap();
        let b = pagd_core::instances::builtin(name, 11).unwrap();
        let sched = StepSchedule::new(2.5, a.lipschitz()).unwrap();
        let m = Method::ProximalAnchored(sched);
        let ta = run(&a, &m, 300, &RunOptions::default()).unwrap();
        let tb = run(&b, &m, 300, &RunOptions::default()).unwrap();
        let mut ca = Vec::new();
        let mut cb = Vec::new();
        ta.write_csv(&mut ca, None).unwrap();
        tb.write_csv(&mut cb, None).unwrap();
        assert_eq!(ca, cb, "{name}");
    }
}

#[test]
fn audit_passes_on_every_builtin() {
    use pagd_core::analysis::{audit_run, AuditOptions};
    for name in pagd_core::instances::BUILTIN_NAMES {
        let p = pagd_core::instances::builtin(name, 0).unwrap();
        let sched = StepSchedule::new(3.0, p.lipschitz()).unwrap();
        let trace = run(&p, &Method::ProximalAnchored(sched), 2000, &RunOptions::default()).unwrap();
        for report in audit_run(&p, &trace, None, &AuditOptions::default()).unwrap() {
            assert!(report.pass, "{name}: {report:?}");
        }
    }
}

#[test]
fn tampered_trace_fails_decay_audit() {
    use pagd_core::analysis::{check_d_decay, TheoremConstants};
    let p = pagd_core::instances::builtin("ball-vi-10", 0).unwrap();
    let sched = StepSchedule::new(2.0, p.lipschitz()).unwrap();
    let mut trace = run(&p, &Method::ProximalAnchored(sched), 1000, &RunOptions::default()).unwrap();
    let k = TheoremConstants::from_trace(&trace, p.known_solution().unwrap()).unwrap();
    for r in &mut trace.records {
        r.d_norm = r.d_norm.map(|d| d * 100.0);
    }
    let report = check_d_decay(&trace, &k);
    assert!(report.failed());
    assert!(report.argmax_t.is_some());
}
