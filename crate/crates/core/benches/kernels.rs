use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kummer_core::exec::Exec;
use kummer_core::gluing::AlhAssembly;
use kummer_core::grid::GridDomain;
use kummer_core::kahler::HermitianForm;
use kummer_core::solver::{linear_solve, torus_problem, Manufactured, Stencil, Ends};
use kummer_core::weighted::{EndSummand, WeightSpec};

fn policies() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", Exec::Parallel));
    v
}

fn spec() -> WeightSpec {
    WeightSpec::new(1.0, 1.0, 0.5, 0.01, EndSummand::None).unwrap()
}

fn sparse_apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("sparse_apply_16^4");
    let m = Manufactured::standard();
    let p = torus_problem(16, move |x| m.rhs(x), &spec(), Exec::default()).unwrap();
    let a = p.linearization();
    let x: Vec<f64> = (0..p.len()).map(|i| (i as f64 * 0.37).sin()).collect();
    let mut y = vec![0.0; p.len()];
    for (name, exec) in policies() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| a.apply(&x, &mut y, exec)));
    }
    g.finish();
}

fn ma_residual(c: &mut Criterion) {
    let mut g = c.benchmark_group("ma_residual_16^4");
    for (name, exec) in policies() {
        let m = Manufactured::standard();
        let p = torus_problem(16, move |x| m.rhs(x), &spec(), exec).unwrap();
        let psi: Vec<f64> = (0..p.len()).map(|i| p.domain().point(i)).map(|x| Manufactured::standard().value(&x)).collect();
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| p.ma_residual(&psi).unwrap()));
    }
    g.finish();
}

fn flat_linear_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("linear_solve_12^4");
    g.sample_size(10);
    let d = GridDomain::torus(12);
    let stencil = Stencil::new(d.clone(), Ends::DIRICHLET).unwrap();
    let forms = vec![HermitianForm::flat(); d.len()];
    let rhs: Vec<f64> = (0..d.len()).map(|i| (2.0 * PI * d.point(i)[0]).cos()).collect();
    for (name, exec) in policies() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| linear_solve(&stencil, &forms, &rhs, exec).unwrap()));
    }
    g.finish();
}

fn gluing_summary(c: &mut Criterion) {
    let mut g = c.benchmark_group("x1_gluing_summary");
    let a = AlhAssembly::x1(0.01, None).unwrap();
    let points = a.sample_points(8, 24, 7);
    for (name, exec) in policies() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| a.summary(&points, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(kernels, sparse_apply, ma_residual, flat_linear_solve, gluing_summary);
criterion_main!(kernels);
