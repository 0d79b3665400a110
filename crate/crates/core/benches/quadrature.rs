use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dipole_phase::constants::E_CHARGE;
use dipole_phase::fieldmom::{
    field_momentum_component, MomentumOptions, PointCharge, SlabFieldConfig,
};
use dipole_phase::quadrature::{integrate_3d, IntegrationRegion, QuadratureOptions};
use dipole_phase::{Execution, Vec3};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn gaussian(c: &mut Criterion) {
    let mut g = c.benchmark_group("gaussian_whole_space");
    let region = IntegrationRegion::whole_space();
    for (name, execution) in MODES {
        let opts = QuadratureOptions {
            execution,
            ..QuadratureOptions::with_tolerances(1e-7, 1e-14)
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| integrate_3d(|p: Vec3| (-p.norm_squared()).exp(), &region, o).unwrap())
        });
    }
    g.finish();
}

fn slab_momentum(c: &mut Criterion) {
    let mut g = c.benchmark_group("slab_pi_z");
    g.sample_size(20);
    let cfg = SlabFieldConfig::magnetic(100.0, 0.01).unwrap();
    let charge = PointCharge::new(E_CHARGE, Vec3::new(0.0, 1.0, 2.0)).unwrap();
    for (name, execution) in MODES {
        let mut opts = MomentumOptions::new(1.0);
        opts.quadrature.execution = execution;
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| field_momentum_component(&charge, &cfg, 2, o).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, gaussian, slab_momentum);
criterion_main!(benches);
