use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nalgebra::DVector;
use templag_core::glf::{apply_tempered, glf_eval, GLFExpansion, GLFParams, OpKind, Side, TemperedOperator};
use templag_core::oracle::Callable1D;
use templag_core::solvers::*;
use templag_core::specfun::gauss_laguerre;

fn case_i(lambda: f64) -> HalfLineTFDE {
    let f = Separable::zero().term(|t: f64| t.cos(), Callable1D::new(move |x: f64| x * (-lambda * x).exp()));
    HalfLineTFDE::new(0.5, lambda, f, Callable1D::new(move |x: f64| x * (-lambda * x).exp()), 1.0).unwrap()
}

fn kernels(c: &mut Criterion) {
    c.bench_function("gauss_laguerre_64", |b| {
        b.iter(|| gauss_laguerre(black_box(0.37), 64).unwrap())
    });

    let p = GLFParams::new(-0.6, 1.0).unwrap();
    c.bench_function("glf_eval_n32", |b| b.iter(|| glf_eval(p, 32, black_box(3.1))));

    let u = GLFExpansion::new(p, (0..64).map(|k| 1.0 / (1.0 + k as f64)).collect()).unwrap();
    let op = TemperedOperator { side: Side::Left, kind: OpKind::Integral, order: 0.6, lambda: 1.0 };
    c.bench_function("apply_tempered_n64", |b| b.iter(|| apply_tempered(&op, black_box(&u)).unwrap()));

    let problem = case_i(1.0);
    c.bench_function("assemble_half_line_n32", |b| {
        b.iter(|| assemble_half_line(black_box(&problem), 32).unwrap())
    });

    let basis = build_two_domain_basis(1.0, 16, 16).unwrap();
    c.bench_function("whole_line_blocks_n16", |b| {
        b.iter(|| whole_line_blocks(black_box(&basis), 1.5).unwrap())
    });

    let system = assemble_half_line(&problem, 16).unwrap();
    let c0 = DVector::from_element(system.dimension(), 0.1);
    c.bench_function("rk3_half_line_n16_100_steps", |b| {
        b.iter(|| rk3_integrate(&system, black_box(&c0), 1e-3, &[0.1]).unwrap())
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
