use criterion::{criterion_group, criterion_main, Criterion};
use symkl::lfunction::dirichlet_coefficients;
use symkl::{completed_lambda, fe_defect, QuadParams};
use symkl_bench::{k3_points, k3_spec};

fn lambda(c: &mut Criterion) {
    let spec = k3_spec();
    let q = QuadParams::default();
    let [s, t] = k3_points();
    let n = *spec.euler.keys().last().unwrap() as usize;
    let mut group = c.benchmark_group("lambda-k3");
    group.bench_function("completed_lambda real", |b| b.iter(|| completed_lambda(&spec, s, &q).unwrap()));
    group.bench_function("completed_lambda complex", |b| b.iter(|| completed_lambda(&spec, t, &q).unwrap()));
    group.bench_function("fe_defect", |b| b.iter(|| fe_defect(&spec, s, &q).unwrap()));
    group.bench_function("dirichlet_coefficients", |b| b.iter(|| dirichlet_coefficients(&spec, n).unwrap()));
    group.finish();
}

criterion_group!(benches, lambda);
criterion_main!(benches);
