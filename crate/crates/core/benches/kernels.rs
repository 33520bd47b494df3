use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use graded_core::algebroid::schouten_pairs_with;
use graded_core::constructions::{complete_lift, lie_tower, AlgebroidData, StructureConstants};
use graded_core::par::Execution;
use graded_core::random::Corpus;
use graded_core::bundle::CoordinateSystem;
use graded_core::superalg::{integer, SuperPolynomial};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn dense(chart: &CoordinateSystem, n: u32) -> SuperPolynomial {
    let sum = chart
        .variables()
        .iter()
        .fold(SuperPolynomial::one(), |acc, v| &acc + &SuperPolynomial::var(v));
    sum.pow(n)
}

fn multiply(c: &mut Criterion) {
    let chart = CoordinateSystem::new("U", 1).even("a", 0).even("b", 0).even("c", 0).even("d", 0);
    let (f, g) = (dense(&chart, 6), dense(&chart, 5));
    let mut group = c.benchmark_group("multiply");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(&f).mul_with(black_box(&g), exec)));
    }
    group.finish();
}

fn commutator(c: &mut Criterion) {
    let lie = AlgebroidData::lie_algebra(&StructureConstants::so3());
    let broken = AlgebroidData::lie_algebra(&StructureConstants::so3().perturbed(0, 1, 0, integer(1)));
    let chart = lie.odd_chart();
    let q1 = complete_lift(&lie.q(), &chart, 4).unwrap().q;
    let q2 = complete_lift(&broken.q(), &chart, 4).unwrap().q;
    let mut group = c.benchmark_group("commutator");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| q1.commutator_with(black_box(&q2), exec)));
    }
    group.finish();
}

fn hamiltonian_square(c: &mut Criterion) {
    let (space, p) = lie_tower(&StructureConstants::so3(), 4).unwrap().hamiltonian().unwrap();
    let pairs = space.pairs();
    let mut group = c.benchmark_group("schouten_p_p");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| schouten_pairs_with(&pairs, black_box(&p), black_box(&p), exec))
        });
    }
    group.finish();
}

fn validate(c: &mut Criterion) {
    let atlas = Corpus::new(17).atlas(3, 2, 8);
    let mut group = c.benchmark_group("validate");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(&atlas).validate_with(exec)));
    }
    group.finish();
}

criterion_group!(kernels, multiply, commutator, hamiltonian_square, validate);
criterion_main!(kernels);
