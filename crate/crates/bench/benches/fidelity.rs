use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use photon_fidelity::position::{synthesize_state, SpatialGrid};
use photon_fidelity::{
    apply_transform, example_state, extension, fidelity_m, fidelity_p, theta_general, translate,
    ExtensionQuery, Measure, PhysicalConstants, PoincareTransform, QuadratureSpec, Vector3,
};

fn momentum_fidelity(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let f = example_state(1.0).unwrap();
    let mut group = c.benchmark_group("fidelity_m");
    for a in [0.5, 2.0, 10.0] {
        let g = translate(&f, Vector3::new(0.0, 0.0, a));
        group.bench_with_input(BenchmarkId::from_parameter(a), &g, |b, g| {
            b.iter(|| fidelity_m(black_box(&f), black_box(g), &spec).unwrap())
        });
    }
    group.finish();
}

fn position_fidelity(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let consts = PhysicalConstants::default();
    let f = example_state(1.0).unwrap();
    let g = translate(&f, Vector3::new(0.0, 0.0, 1.0));
    c.bench_function("fidelity_p/parseval", |b| {
        b.iter(|| fidelity_p(black_box(&f), black_box(&g), &spec, &consts).unwrap())
    });
}

fn boosted_fidelity(c: &mut Criterion) {
    let spec = QuadratureSpec {
        rel_tol: 1e-6,
        ..QuadratureSpec::default()
    };
    let f = example_state(1.0).unwrap();
    let g = translate(&f, Vector3::new(0.0, 0.0, 1.0));
    let t = PoincareTransform::boost_y(0.5).unwrap();
    let (bf, bg) = (apply_transform(&f, &t), apply_transform(&g, &t));
    let mut group = c.benchmark_group("boosted");
    group.sample_size(10);
    group.bench_function("fidelity_m", |b| {
        b.iter(|| fidelity_m(black_box(&bf), black_box(&bg), &spec).unwrap())
    });
    group.finish();
}

fn wigner_phase(c: &mut Criterion) {
    let t = PoincareTransform::boost_y(0.9).unwrap();
    let k = Vector3::new(0.3, -0.4, 1.2);
    c.bench_function("theta_general", |b| b.iter(|| theta_general(&t, black_box(k)).unwrap()));
}

fn synthesis(c: &mut Criterion) {
    let spec = QuadratureSpec {
        rel_tol: 1e-6,
        ..QuadratureSpec::default()
    };
    let consts = PhysicalConstants::default();
    let f = example_state(1.0).unwrap();
    let grid = SpatialGrid::cube(4.0, 16, 0.0).unwrap();
    let mut group = c.benchmark_group("synthesis");
    group.sample_size(10);
    group.bench_function("16^3", |b| {
        b.iter(|| synthesize_state(black_box(&f), &grid, &spec, &consts).unwrap())
    });
    group.finish();
}

fn extension_solver(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let consts = PhysicalConstants::default();
    let mut group = c.benchmark_group("extension");
    group.sample_size(10);
    for n in [3.0, 30.0] {
        let q = ExtensionQuery::new(Measure::Coherent, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| {
            b.iter(|| extension(q, &spec, &consts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    momentum_fidelity,
    position_fidelity,
    boosted_fidelity,
    wigner_phase,
    synthesis,
    extension_solver
);
criterion_main!(benches);
