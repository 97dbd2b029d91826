use std::f64::consts::{E, FRAC_PI_2};

use proptest::prelude::*;

use karamata_core::numerics::{lambert_w0, lambert_wm1};
use karamata_core::operators::project_exp_cone;
use karamata_core::rates::{invert_phi_big, phi_big};
use karamata_core::scenario::{parse_csv, run_scenario, to_csv, ReportRow, ScenarioConfig};
use karamata_core::solver::{
    audit_fejer, estimate_empirical_psi, run, run_with_target, PsiSampling, QuasiCyclicSchedule,
    StopCriteria,
};
use karamata_core::{FixedPointOperator, PhiSpec, Point, RateBoundFn, RegFunc, SetDescriptor};

fn sets() -> Vec<SetDescriptor> {
    vec![
        SetDescriptor::line(0.7),
        SetDescriptor::Halfspace {
            normal: vec![1.0, -2.0, 0.5],
            offset: 0.3,
        },
        SetDescriptor::ExpCone,
        SetDescriptor::ExpConeFace,
        SetDescriptor::GammaEpigraph,
        SetDescriptor::PowerEpigraph { p: 1.0 },
        SetDescriptor::PowerEpigraph { p: 1.7 },
        SetDescriptor::LogEpigraph { gamma: 1.0 },
        SetDescriptor::XAxisPlane { coord: 1 },
        SetDescriptor::DrFixRay,
        SetDescriptor::origin(3),
    ]
}

fn dim_of(s: &SetDescriptor) -> usize {
    match s {
        SetDescriptor::Halfspace { .. }
        | SetDescriptor::ExpCone
        | SetDescriptor::ExpConeFace
        | SetDescriptor::Singleton { .. } => 3,
        _ => 2,
    }
}

fn entropic_spec() -> PhiSpec {
    let psi = RegFunc::at_zero(|t: f64| if t <= 0.0 { 0.0 } else { -t.sqrt() * t.ln() }, (-2.0f64).exp())
        .with_index(0.5);
    PhiSpec::new(psi, 0.5, 1.0, 2, 1e-2)
}

fn lines(theta: f64) -> Vec<FixedPointOperator> {
    vec![
        FixedPointOperator::projection(SetDescriptor::line(theta)),
        FixedPointOperator::projection(SetDescriptor::line(0.0)),
    ]
}

fn coord() -> impl Strategy<Value = f64> {
    -2.0f64..2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lambert_identity_w0(x in prop_oneof![-1.0 / E..0.0, 0.0f64..10.0, 10.0f64..1e12]) {
        let w = lambert_w0(x).unwrap();
        prop_assert!(w >= -1.0);
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn lambert_identity_wm1(e in -300.0f64..-0.4343) {
        let x = -(10f64.powf(e));
        let w = lambert_wm1(x).unwrap();
        prop_assert!(w <= -1.0);
        // compare in log form: w + ln(-w) = ln(-x)
        prop_assert!((w + (-w).ln() - (-x).ln()).abs() <= 1e-12 * (-x).ln().abs().max(1.0));
    }

    #[test]
    fn projections_idempotent_and_nonexpansive(
        idx in 0usize..11,
        p in prop::array::uniform3(coord()),
        q in prop::array::uniform3(coord()),
    ) {
        let set = &sets()[idx];
        let n = dim_of(set);
        let (p, q) = (Point::new(&p[..n]), Point::new(&q[..n]));
        let pp = set.project(&p).unwrap();
        let ppp = set.project(&pp).unwrap();
        prop_assert!(pp.dist(&ppp) <= 1e-9, "{set:?}: {pp:?} -> {ppp:?}");
        prop_assert!(set.contains(&pp, 1e-9).unwrap());
        let pq = set.project(&q).unwrap();
        prop_assert!(pp.dist(&pq) <= p.dist(&q) * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn exp_cone_variational_inequality(
        p in prop::array::uniform3(coord()),
        r in -5.0f64..5.0,
        v in 0.0f64..3.0,
        lift in 0.0f64..2.0,
    ) {
        let pp = project_exp_cone(p).unwrap();
        let z = [r * v, v, v * r.exp() + lift];
        let ip: f64 = (0..3).map(|i| (p[i] - pp[i]) * (z[i] - pp[i])).sum();
        prop_assert!(ip <= 1e-8, "p={p:?} P={pp:?} z={z:?}: {ip}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rate_bound_nonincreasing(k in 0u64..200_000, dk in 0u64..50_000) {
        let rb = RateBoundFn::new(&entropic_spec(), 1e-3).unwrap();
        let (a, b) = (rb.bound(k).unwrap(), rb.bound(k + dk).unwrap());
        prop_assert!(b <= a, "R({}) = {b} > R({k}) = {a}", k + dk);
        // constant on each window of length s
        prop_assert_eq!(rb.bound(k - k % 2).unwrap(), rb.bound(k - k % 2 + 1).unwrap());
    }

    #[test]
    fn phi_big_decreasing_and_invertible(e1 in -7.0f64..-1.0, gap in 0.01f64..2.0) {
        let phi = RegFunc::at_zero(|t: f64| if t <= 0.0 { 0.0 } else { -t * t.ln() }, 1.0 / E);
        let delta = (-2.0f64).exp();
        let (u1, u2) = (10f64.powf(e1), 10f64.powf(e1 + gap).min(delta));
        let (a, b) = (phi_big(&phi, delta, u1).unwrap(), phi_big(&phi, delta, u2).unwrap());
        prop_assert!(a > b);
        let back = invert_phi_big(&phi, delta, a).unwrap();
        prop_assert!((back / u1 - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn cyclic_and_parallel_schedules_cover(
        m in 1usize..6,
        raw in prop::collection::vec(0.05f64..1.0, 1..6),
    ) {
        prop_assert!(QuasiCyclicSchedule::cyclic(m).unwrap().check(100));
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let sched = QuasiCyclicSchedule::parallel_schedule(&w).unwrap();
        prop_assert!(sched.check(100));
        let sum: f64 = sched.weights_at(7).iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn parallel_copies_equal_plain_iteration(
        raw in prop::collection::vec(0.05f64..1.0, 2..5),
        x in prop::array::uniform2(coord()),
    ) {
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let op = FixedPointOperator::projection(SetDescriptor::line(0.3));
        let stop = StopCriteria { max_iter: 20, residual_tol: 0.0, dist_tol: None };
        let x0 = Point::new(x.to_vec());
        let par = run(&vec![op.clone(); w.len()], &QuasiCyclicSchedule::parallel_schedule(&w).unwrap(), &x0, &stop).unwrap();
        let plain = run(&[op], &QuasiCyclicSchedule::cyclic(1).unwrap(), &x0, &stop).unwrap();
        // the plain run may stop early on an exactly zero residual
        let last = plain.last().unwrap();
        for a in &par.records {
            let b = plain.records.iter().find(|b| b.k == a.k).unwrap_or(last);
            prop_assert!(a.point.dist(&b.point) <= 1e-12);
        }
    }

    #[test]
    fn alternating_lines_are_fejer(theta in 0.1f64..(FRAC_PI_2 - 0.1), x in prop::array::uniform2(coord())) {
        let stop = StopCriteria { max_iter: 200, residual_tol: 0.0, dist_tol: None };
        let trace = run(&lines(theta), &QuasiCyclicSchedule::ap_schedule(), &Point::new(x.to_vec()), &stop).unwrap();
        let report = audit_fejer(&trace, &[Point::zeros(2)]);
        prop_assert!(report.passed(), "{:?}", report.violations.first());
    }

    #[test]
    fn alternating_residual_nonincreasing(x in -0.5f64..0.5, mu in -0.3f64..0.6) {
        let ops = vec![
            FixedPointOperator::projection(SetDescriptor::GammaEpigraph),
            FixedPointOperator::projection(SetDescriptor::x_axis()),
        ];
        let stop = StopCriteria { max_iter: 400, residual_tol: 0.0, dist_tol: None };
        let trace = run_with_target(
            &ops,
            &QuasiCyclicSchedule::ap_schedule(),
            &Point::from([x, mu]),
            &stop,
            Some(&SetDescriptor::origin(2)),
        )
        .unwrap();
        let res = trace.residuals();
        for w in res[1..].windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{} -> {}", w[0], w[1]);
        }
        let d = trace.dists().unwrap();
        for w in d.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(
        (0u64..1_000_000, prop::option::of(any::<f64>()), any::<f64>(), prop::option::of(1e-300f64..1e3), prop::option::of(0.0f64..1.0)),
        0..30,
    )) {
        let rows: Vec<ReportRow> = rows
            .into_iter()
            .map(|(k, dist, residual, bound, profile)| ReportRow {
                k,
                dist: dist.filter(|d| d.is_finite()),
                residual: if residual.is_finite() { residual } else { 0.0 },
                bound,
                profile,
            })
            .collect();
        let back = parse_csv(&to_csv(&rows)).unwrap();
        prop_assert_eq!(back, rows);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn empirical_psi_is_monotone(theta in 0.2f64..1.2, seed in any::<u64>()) {
        let mut cfg = PsiSampling::new(2, 1.0, vec![1e-4, 1e-3, 1e-2, 1e-1]);
        cfg.samples_per_a = 200;
        cfg.seed = seed;
        let est = estimate_empirical_psi(&lines(theta), &SetDescriptor::origin(2), &cfg).unwrap();
        let vals: Vec<f64> = est.value.iter().flatten().copied().collect();
        prop_assert_eq!(vals.len(), 4);
        for w in vals.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn scenarios_are_deterministic(theta in 0.2f64..1.3, seed in any::<u64>()) {
        let mut cfg = ScenarioConfig::new("holder_lines").with_param("theta", theta);
        cfg.seed = seed;
        let a = run_scenario(&cfg).unwrap();
        let b = run_scenario(&cfg).unwrap();
        prop_assert_eq!(to_csv(&a.rows), to_csv(&b.rows));
        let mut cfg = ScenarioConfig::new("holder_entropic_ap");
        cfg.stop = Some(StopCriteria { max_iter: 3000, ..StopCriteria::default() });
        cfg.seed = seed;
        prop_assert_eq!(to_csv(&run_scenario(&cfg).unwrap().rows), to_csv(&run_scenario(&cfg).unwrap().rows));
    }
}
