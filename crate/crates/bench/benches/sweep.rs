use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use sweepslide::{
    check_collision, check_collision_brute_force, collide_with_world_legacy, sphere_sweep,
    sweep_unit_sphere_triangle, LegacyConfig, ResponseConfig, Triangle, Vector3,
};
use sweepslide_bench::{queries, soup_world};

fn narrowphase(c: &mut Criterion) {
    let tri = Triangle::new(
        Vector3::new(-2.0, -2.0, 0.0),
        Vector3::new(3.0, -1.0, 0.5),
        Vector3::new(0.0, 3.0, -0.5),
    )
    .unwrap();
    let mut g = c.benchmark_group("triangle");
    g.bench_function("face", |b| {
        b.iter(|| {
            sweep_unit_sphere_triangle(
                black_box(Vector3::new(0.0, 0.0, 3.0)),
                black_box(Vector3::new(0.1, 0.0, -4.0)),
                &tri,
            )
        })
    });
    g.bench_function("edge", |b| {
        b.iter(|| {
            sweep_unit_sphere_triangle(
                black_box(Vector3::new(-4.0, 0.5, 3.0)),
                black_box(Vector3::new(0.0, 0.0, -4.0)),
                &tri,
            )
        })
    });
    g.bench_function("miss", |b| {
        b.iter(|| {
            sweep_unit_sphere_triangle(
                black_box(Vector3::new(9.0, 9.0, 3.0)),
                black_box(Vector3::new(0.0, 0.0, -4.0)),
                &tri,
            )
        })
    });
    g.finish();
}

fn broadphase(c: &mut Criterion) {
    let mut g = c.benchmark_group("world");
    for n in [100, 1_000, 10_000] {
        let world = soup_world(n, 1);
        let qs = queries(&world, 256, 2);
        g.bench_with_input(BenchmarkId::new("grid", n), &qs, |b, qs| {
            b.iter(|| {
                qs.iter()
                    .filter(|(p, v)| check_collision(&world, *p, *v).is_some())
                    .count()
            })
        });
        if n <= 1_000 {
            g.bench_with_input(BenchmarkId::new("brute_force", n), &qs, |b, qs| {
                b.iter(|| {
                    qs.iter()
                        .filter(|(p, v)| check_collision_brute_force(&world, *p, *v).is_some())
                        .count()
                })
            });
        }
    }
    g.finish();
}

fn response(c: &mut Criterion) {
    let world = soup_world(1_000, 3);
    let qs = queries(&world, 256, 4);
    let cfg = ResponseConfig::default();
    let legacy = LegacyConfig::default();
    let mut g = c.benchmark_group("frame");
    g.bench_function("improved", |b| {
        b.iter(|| {
            qs.iter()
                .map(|(p, v)| sphere_sweep(&world, *p, *v, &cfg).iterations)
                .sum::<usize>()
        })
    });
    g.bench_function("legacy", |b| {
        b.iter(|| {
            qs.iter()
                .map(|(p, v)| collide_with_world_legacy(&world, *p, *v, &legacy).iterations)
                .sum::<usize>()
        })
    });
    g.finish();
}

criterion_group!(benches, narrowphase, broadphase, response);
criterion_main!(benches);
