use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spinor_gp_bench::{driven_params, product_state, projector, ring_model, trapped_field};
use spinor_gp_core::counting::apply_pk;
use spinor_gp_core::gp::StrangStepper;
use spinor_gp_core::manybody::Propagator;
use spinor_gp_core::scattering::{build_shell, RadialPotential, SolverSettings};

fn strang_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("strang_step");
    for (dim, points) in [(1, 1024), (2, 128), (3, 32)] {
        let f0 = trapped_field(dim, points);
        let params = driven_params(1e-3);
        let stepper = StrangStepper::new(&f0.grid, &params).unwrap();
        group.bench_with_input(BenchmarkId::new(format!("{dim}d"), points), &f0, |b, f0| {
            let mut f = f0.clone();
            b.iter(|| stepper.step(&mut f, 0.0).unwrap());
        });
    }
    group.finish();
}

fn krylov(c: &mut Criterion) {
    let mut group = c.benchmark_group("krylov_step");
    group.sample_size(20);
    for n in [4usize, 8] {
        let model = ring_model(4);
        let psi = product_state(4, n);
        let mut prop = Propagator::new(&model, psi.basis.clone()).unwrap();
        group.bench_with_input(BenchmarkId::new("ring4", n), &psi, |b, psi| {
            b.iter(|| prop.advance(psi, 0.0, 0.01, 0.01).unwrap());
        });
    }
    group.finish();
}

fn shell(c: &mut Criterion) {
    let base = RadialPotential::square_well(2.0, 1.0).unwrap();
    let settings = SolverSettings::default();
    let mut group = c.benchmark_group("build_shell");
    for n in [100u64, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| build_shell(&base, 0.4, n, &settings).unwrap());
        });
    }
    group.finish();
}

fn projectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_pk");
    for (sites, n) in [(3usize, 5usize), (4, 6)] {
        let psi = product_state(sites, n);
        let proj = projector(sites, n);
        group.bench_with_input(BenchmarkId::new(format!("sites{sites}"), n), &psi, |b, psi| {
            b.iter(|| apply_pk(psi, &proj, 1).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, strang_step, krylov, shell, projectors);
criterion_main!(benches);
