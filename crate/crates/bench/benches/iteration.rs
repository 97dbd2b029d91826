use criterion::{black_box, criterion_group, criterion_main, Criterion};
use karamata_bench::{cube_points, holder_entropic_setup};
use karamata_core::operators::project_exp_cone;
use karamata_core::solver::{run_with_target, StopCriteria};
use karamata_core::{Point, SetDescriptor};

fn projections(c: &mut Criterion) {
    let pts = cube_points(256);
    c.bench_function("exp cone projection x256", |b| {
        b.iter(|| {
            for p in &pts {
                black_box(project_exp_cone(*p).unwrap());
            }
        })
    });
    let epi = SetDescriptor::GammaEpigraph;
    let q = Point::from([0.2, -0.05]);
    c.bench_function("gamma epigraph projection", |b| {
        b.iter(|| epi.project(black_box(&q)).unwrap())
    });
}

fn ap_run(c: &mut Criterion) {
    let setup = holder_entropic_setup();
    let x0 = Point::from([0.3, 0.2]);
    let stop = StopCriteria {
        max_iter: 1000,
        residual_tol: 0.0,
        dist_tol: None,
    };
    c.bench_function("holder-entropic AP, 1000 iterations", |b| {
        b.iter(|| {
            run_with_target(&setup.ops, &setup.schedule, &x0, &stop, Some(&setup.target)).unwrap()
        })
    });
}

criterion_group!(benches, projections, ap_run);
criterion_main!(benches);
