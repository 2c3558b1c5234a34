use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use flagfloat::flag_simplex::barycenter_subdivision;
use flagfloat::floating::{a_plus_measure_mc, wet_part_measure, DirectionSpec};
use flagfloat::generators;
use flagfloat::measure::Weight;

fn flags(c: &mut Criterion) {
    let mut g = c.benchmark_group("flags");
    for n in [3, 4, 5] {
        g.bench_with_input(BenchmarkId::new("cube", n), &n, |b, &n| {
            b.iter(|| generators::cube(n).unwrap().face_lattice().flag_count())
        });
    }
    g.bench_function("cyclic(4,7)", |b| {
        b.iter(|| {
            generators::cyclic(4, 7)
                .unwrap()
                .face_lattice()
                .flag_count()
        })
    });
    g.bench_function("random hull 3d/50", |b| {
        b.iter(|| generators::random_polytope(3, 50, 7).unwrap())
    });
    g.finish();
}

fn subdivision(c: &mut Criterion) {
    let cube = generators::cube(3).unwrap();
    c.bench_function("barycentric subdivision cube(3)", |b| {
        b.iter(|| barycenter_subdivision(&cube))
    });
}

fn wet_parts(c: &mut Criterion) {
    let mut g = c.benchmark_group("wet part");
    g.sample_size(10);
    let sq = generators::cube(2).unwrap();
    let spec = DirectionSpec::new(64);
    for (name, w) in [
        ("uniform", Weight::Uniform),
        ("1+x", Weight::one_plus_coordinate(2, 0)),
    ] {
        g.bench_function(format!("square {name} 1e-4"), |b| {
            b.iter(|| wet_part_measure(&w, &w, &sq, 1e-4, &spec, 1e-3).unwrap())
        });
    }
    let tri = generators::regular_polygon(3, 0.8).unwrap();
    g.bench_function("hyperbolic triangle 1e-5", |b| {
        b.iter(|| {
            wet_part_measure(
                &Weight::Hyperbolic,
                &Weight::Hyperbolic,
                &tri,
                1e-5,
                &spec,
                1e-3,
            )
            .unwrap()
        })
    });
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let t = generators::simplex(2).unwrap();
    let mut g = c.benchmark_group("monte carlo");
    g.sample_size(10);
    g.bench_function("A+ triangle 1e5 samples", |b| {
        b.iter(|| a_plus_measure_mc(&t, 0, 1e-3, 100_000, 1).unwrap())
    });
    g.finish();
}

criterion_group!(benches, flags, subdivision, wet_parts, monte_carlo);
criterion_main!(benches);
