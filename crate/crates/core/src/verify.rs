//! Acceptance checks, shared by the `verify` CLI subcommand and the
//! `acceptance` test target.
//!
//! Each check returns a [`CheckOutcome`]; thresholds are the constants
//! below and are never scaled by the trial count.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detect::{
    check_collision, check_collision_brute_force, sweep_aabb, sweep_unit_sphere_triangle,
};
use crate::ellipsoid::{from_sphere_space, to_sphere_space, EllipsoidRadii};
use crate::math::{normalize, robust_quadratic_roots, Plane, Real, Triangle, Vector3};
use crate::oracle::{self, bisection_time_of_impact, OracleSweep};
use crate::response::{project_dest_one_plane, FrameResult, LegacyConfig, ResponseConfig};
use crate::scenario::presets::{
    self, corner_approach, ACUTE_SPEED, ACUTE_START_DISTANCE, CREASE_START, CREASE_VELOCITY,
    OBTUSE_SPEED, OBTUSE_START_DISTANCE,
};
use crate::scenario::{builtin_mesh, Algorithm, BuiltinMesh, MeshParams, Simulation};
use crate::world::World;

pub const PENETRATION_TOLERANCE: Real = 1e-6;
pub const IMPROVED_MAX_ITERATIONS: usize = 3;
pub const LEGACY_MAX_ITERATIONS: usize = 5;
pub const FUZZ_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const SCENARIO_TIME_LIMIT: Duration = Duration::from_secs(1);
pub const FREEZE_MIN_ITERATIONS: usize = 100;
pub const FREEZE_MAX_RECURSION: usize = 1000;
pub const JITTER_FRAMES: usize = 30;
pub const JITTER_WINDOW: usize = 20;
pub const JITTER_MIN_LEGACY_FRAMES: usize = 10;
pub const CREASE_CONFINEMENT: Real = 1e-9;
pub const PROJECTION_TOLERANCE: Real = 1e-9;
pub const DETECTION_T_TOLERANCE: Real = 1e-5;
pub const TANGENCY_TOLERANCE: Real = 1e-6;
pub const QUADRATIC_RELATIVE_TOLERANCE: Real = 1e-10;
pub const ELLIPSOID_HEIGHT_TOLERANCE: Real = 1e-6;
pub const ROUND_TRIP_RELATIVE_TOLERANCE: Real = 1e-12;

/// Sizes of the randomized checks.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Frames in the fuzz corpus for the iteration and penetration checks.
    pub fuzz_frames: usize,
    /// Random cases for the per-operation checks.
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            fuzz_frames: 10_000,
            trials: 1_000,
            seed: 0x5EED,
        }
    }
}

/// Result of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {}: {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed
        )
    }
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> (bool, String)) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = f();
    CheckOutcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Runs every criterion in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    let corpus = fuzz_corpus(opts);
    vec![
        iteration_bounds(&corpus),
        no_penetration(&corpus),
        freeze_reproduction(),
        jitter_reproduction(),
        crease_confinement(),
        one_plane_projection(opts),
        detection_oracle(opts),
        broadphase_soundness(opts),
        quadratic_robustness(opts),
        ellipsoid_round_trip(opts),
    ]
}

fn rng(opts: &VerifyOptions, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(opts.seed);
    r.set_stream(stream);
    r
}

fn random_unit(rng: &mut impl Rng) -> Vector3 {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let l = v.length();
        if l > 0.1 && l <= 1.0 {
            return v / l;
        }
    }
}

fn random_point(rng: &mut impl Rng, r: Real) -> Vector3 {
    Vector3::new(
        rng.gen_range(-r..=r),
        rng.gen_range(-r..=r),
        rng.gen_range(-r..=r),
    )
}

// ---------------------------------------------------------------------------
// Fuzz corpus (criteria 1 and 2)

pub const FUZZ_FRAMES_PER_WORLD: usize = 100;
pub const FUZZ_SOUP_COUNT: usize = 50;
pub const FUZZ_SOUP_EXTENT: Real = 8.0;
pub const FUZZ_MAX_SPEED: Real = 6.0;

/// Aggregates from driving both algorithms through random soups.
#[derive(Clone, Debug, Default)]
pub struct FuzzStats {
    pub frames: usize,
    pub improved_max_iterations: usize,
    pub improved_min_distance: Real,
    pub improved_violations: usize,
    pub improved_hits: usize,
    pub legacy_max_iterations: usize,
    pub legacy_min_distance: Real,
    pub legacy_violations: usize,
    pub elapsed: Duration,
    /// First improved frame that penetrated: world seed, start, velocity.
    pub first_violation: Option<(u64, Vector3, Vector3)>,
}

/// Drives `opts.fuzz_frames` frames, 100 per random soup, through both
/// algorithms. Each algorithm follows its own trajectory from the same
/// start with the same commanded velocities. Velocities are random with a
/// pull back toward the soup so the sphere keeps colliding.
pub fn fuzz_corpus(opts: &VerifyOptions) -> FuzzStats {
    let start = Instant::now();
    let mut stats = FuzzStats {
        improved_min_distance: Real::INFINITY,
        legacy_min_distance: Real::INFINITY,
        ..Default::default()
    };
    let mut rng = rng(opts, 1);
    let worlds = opts.fuzz_frames.div_ceil(FUZZ_FRAMES_PER_WORLD);
    let response = ResponseConfig::default();
    let legacy = LegacyConfig::default();

    for w in 0..worlds {
        let frames = FUZZ_FRAMES_PER_WORLD.min(opts.fuzz_frames - w * FUZZ_FRAMES_PER_WORLD);
        let seed = opts.seed.wrapping_mul(1_000_003).wrapping_add(w as u64);
        let params = MeshParams {
            n: Some(FUZZ_SOUP_COUNT),
            seed: Some(seed),
            extent: Some(FUZZ_SOUP_EXTENT),
            ..Default::default()
        };
        let world = World::build(
            builtin_mesh(BuiltinMesh::RandomSoup, &params).expect("valid soup"),
            4.0,
        )
        .expect("valid cell size");
        let start_pos = loop {
            let p = random_point(&mut rng, FUZZ_SOUP_EXTENT + 2.0);
            if oracle::min_mesh_distance(p, world.triangles()) >= 1.0 {
                break p;
            }
        };
        let mut improved = Simulation::new(
            &world,
            EllipsoidRadii::UNIT,
            start_pos,
            Algorithm::Improved,
            response,
            legacy,
        )
        .expect("start is clear");
        let mut old = Simulation::new(
            &world,
            EllipsoidRadii::UNIT,
            start_pos,
            Algorithm::Legacy,
            response,
            legacy,
        )
        .expect("start is clear");
        for _ in 0..frames {
            let speed = rng.gen_range(0.0..FUZZ_MAX_SPEED);
            let pull = -improved.position() * 0.15;
            let vel = random_unit(&mut rng) * speed + pull;

            let before = improved.position();
            let r = improved.step(vel);
            stats.improved_max_iterations = stats.improved_max_iterations.max(r.iterations);
            stats.improved_hits += usize::from(r.iterations > 0);
            let d = improved.min_mesh_distance();
            stats.improved_min_distance = stats.improved_min_distance.min(d);
            if d < 1.0 - PENETRATION_TOLERANCE {
                stats.improved_violations += 1;
                stats.first_violation.get_or_insert((seed, before, vel));
            }

            let r = old.step(vel);
            stats.legacy_max_iterations = stats.legacy_max_iterations.max(r.iterations);
            let d = old.min_mesh_distance();
            stats.legacy_min_distance = stats.legacy_min_distance.min(d);
            if d < 1.0 - PENETRATION_TOLERANCE {
                stats.legacy_violations += 1;
            }
            stats.frames += 1;
        }
    }
    stats.elapsed = start.elapsed();
    stats
}

/// Criterion 1.
pub fn iteration_bounds(c: &FuzzStats) -> CheckOutcome {
    let passed = c.frames >= 1
        && c.improved_max_iterations <= IMPROVED_MAX_ITERATIONS
        && c.legacy_max_iterations <= LEGACY_MAX_ITERATIONS
        && c.elapsed <= FUZZ_TIME_LIMIT;
    CheckOutcome {
        id: 1,
        name: "iteration bounds",
        passed,
        detail: format!(
            "{} frames ({} with contact): improved max {} (≤ {}), legacy max {} (≤ {}), corpus time {:.2?} (≤ {:?})",
            c.frames,
            c.improved_hits,
            c.improved_max_iterations,
            IMPROVED_MAX_ITERATIONS,
            c.legacy_max_iterations,
            LEGACY_MAX_ITERATIONS,
            c.elapsed,
            FUZZ_TIME_LIMIT
        ),
        elapsed: c.elapsed,
    }
}

/// Criterion 2. Legacy penetration is reported, not judged.
pub fn no_penetration(c: &FuzzStats) -> CheckOutcome {
    let mut detail = format!(
        "improved: {} of {} frames below 1 − {:e} (min distance {:.9}); legacy: {} violations (min distance {:.9})",
        c.improved_violations, c.frames, PENETRATION_TOLERANCE, c.improved_min_distance, c.legacy_violations, c.legacy_min_distance
    );
    if let Some((seed, pos, vel)) = c.first_violation {
        detail.push_str(&format!(
            "; first improved violation: soup seed {seed}, pos {pos}, vel {vel}"
        ));
    }
    CheckOutcome {
        id: 2,
        name: "no penetration",
        passed: c.frames >= 1 && c.improved_violations == 0,
        detail,
        elapsed: Duration::ZERO,
    }
}

// ---------------------------------------------------------------------------
// Scripted corner scenarios (criteria 3–5)

pub const FREEZE_FRAMES: usize = 3;

/// Criterion 3.
pub fn freeze_reproduction() -> CheckOutcome {
    timed(3, "freeze reproduction", || {
        let tris = builtin_mesh(
            BuiltinMesh::AcuteCorner,
            &MeshParams {
                angle: Some(5.0),
                ..Default::default()
            },
        )
        .expect("valid corner");
        let world = World::build(tris.clone(), 4.0).expect("valid cell size");
        let (start, vel) = corner_approach(&tris, ACUTE_START_DISTANCE, ACUTE_SPEED);
        let t0 = Instant::now();
        let run = |algorithm| {
            let legacy = LegacyConfig::new(0.005, FREEZE_MAX_RECURSION).expect("valid config");
            let mut sim = Simulation::new(
                &world,
                EllipsoidRadii::UNIT,
                start,
                algorithm,
                ResponseConfig::default(),
                legacy,
            )
            .expect("start is clear");
            (0..FREEZE_FRAMES)
                .map(|_| sim.step(vel).iterations)
                .max()
                .unwrap_or(0)
        };
        let legacy_max = run(Algorithm::Legacy);
        let improved_max = run(Algorithm::Improved);
        let elapsed = t0.elapsed();
        (
            legacy_max >= FREEZE_MIN_ITERATIONS && improved_max <= IMPROVED_MAX_ITERATIONS && elapsed <= SCENARIO_TIME_LIMIT,
            format!(
                "5° wedge: legacy (cap {FREEZE_MAX_RECURSION}) max {legacy_max} iterations/frame (≥ {FREEZE_MIN_ITERATIONS}), improved max {improved_max} (≤ {IMPROVED_MAX_ITERATIONS}), {elapsed:.2?}"
            ),
        )
    })
}

pub const JITTER_ANGLE: Real = 135.0;

/// Per-frame displacements of one algorithm in the obtuse-corner scenario.
pub fn jitter_displacements(algorithm: Algorithm) -> Vec<Real> {
    let tris = builtin_mesh(
        BuiltinMesh::ObtuseCorner,
        &MeshParams {
            angle: Some(JITTER_ANGLE),
            ..Default::default()
        },
    )
    .expect("valid corner");
    let world = World::build(tris.clone(), 4.0).expect("valid cell size");
    let (start, vel) = corner_approach(&tris, OBTUSE_START_DISTANCE, OBTUSE_SPEED);
    let mut sim = Simulation::new(
        &world,
        EllipsoidRadii::UNIT,
        start,
        algorithm,
        ResponseConfig::default(),
        LegacyConfig::default(),
    )
    .expect("start is clear");
    (0..JITTER_FRAMES)
        .map(|_| {
            let before = sim.position();
            sim.step(vel);
            sim.position().distance(before)
        })
        .collect()
}

/// Criterion 4.
pub fn jitter_reproduction() -> CheckOutcome {
    timed(4, "jitter reproduction", || {
        let eps = ResponseConfig::default().very_close_dist();
        let t0 = Instant::now();
        let legacy = jitter_displacements(Algorithm::Legacy);
        let improved = jitter_displacements(Algorithm::Improved);
        let elapsed = t0.elapsed();
        let tail = JITTER_FRAMES - JITTER_WINDOW;
        let legacy_moving = legacy[tail..].iter().filter(|&&d| d > eps).count();
        let improved_max = improved[tail..].iter().copied().fold(0.0, Real::max);
        (
            legacy_moving >= JITTER_MIN_LEGACY_FRAMES && improved_max < eps && elapsed <= SCENARIO_TIME_LIMIT,
            format!(
                "{JITTER_ANGLE}° corner, last {JITTER_WINDOW} frames: legacy moved > ε on {legacy_moving} (≥ {JITTER_MIN_LEGACY_FRAMES}), improved max displacement {improved_max:.3e} (< {eps}), {elapsed:.2?}"
            ),
        )
    })
}

pub const CREASE_ANGLE: Real = 120.0;

/// Criterion 5.
pub fn crease_confinement() -> CheckOutcome {
    timed(5, "crease confinement", || {
        let tris = builtin_mesh(
            BuiltinMesh::Crease,
            &MeshParams {
                angle: Some(CREASE_ANGLE),
                ..Default::default()
            },
        )
        .expect("valid crease");
        let world = World::build(tris.clone(), 4.0).expect("valid cell size");
        let planes: Vec<Plane> = tris.iter().map(Triangle::plane).collect();
        let eps = ResponseConfig::default().very_close_dist();
        let (start, vel) = (CREASE_START, CREASE_VELOCITY);
        let mut sim = Simulation::new(
            &world,
            EllipsoidRadii::UNIT,
            start,
            Algorithm::Improved,
            ResponseConfig::default(),
            LegacyConfig::default(),
        )
        .expect("start is clear");

        let mut worst_confinement: Real = 0.0;
        let mut crease_frames = 0;
        let mut distances: Vec<[Real; 2]> = Vec::new();
        for _ in 0..presets::CREASE_FRAMES {
            let r: FrameResult = sim.step(vel);
            if r.planes.len() == 2 && r.steps.len() >= 2 {
                crease_frames += 1;
                let v = r.steps[1].vel;
                let len = v.length();
                for p in &r.planes {
                    let ratio = if len > 0.0 {
                        v.dot(*p.normal).abs() / len
                    } else {
                        0.0
                    };
                    worst_confinement = worst_confinement.max(ratio);
                }
            }
            if crease_frames > 0 {
                let p = sim.sphere_position();
                distances.push([planes[0].signed_distance(p), planes[1].signed_distance(p)]);
            }
        }
        let spread = |k: usize| {
            let (lo, hi) = distances
                .iter()
                .fold((Real::INFINITY, Real::NEG_INFINITY), |(lo, hi), d| {
                    (lo.min(d[k]), hi.max(d[k]))
                });
            hi - lo
        };
        let (s0, s1) = if distances.is_empty() {
            (Real::INFINITY, Real::INFINITY)
        } else {
            (spread(0), spread(1))
        };
        (
            crease_frames > 0 && worst_confinement <= CREASE_CONFINEMENT && s0 <= 2.0 * eps && s1 <= 2.0 * eps,
            format!(
                "{crease_frames} two-plane frames, max |vel·n|/‖vel‖ = {worst_confinement:.2e} (≤ {CREASE_CONFINEMENT:e}); plane-distance spread over {} frames: {s0:.2e}, {s1:.2e} (≤ 2ε = {})",
                distances.len(),
                2.0 * eps
            ),
        )
    })
}

// ---------------------------------------------------------------------------
// Operation-level checks (criteria 6–10)

/// Criterion 6.
pub fn one_plane_projection(opts: &VerifyOptions) -> CheckOutcome {
    timed(6, "one-plane projection", || {
        let mut rng = rng(opts, 6);
        let cfg = ResponseConfig::default();
        let mut worst: Real = 0.0;
        for _ in 0..opts.trials {
            let plane = Plane::new(
                random_point(&mut rng, 100.0),
                normalize(random_unit(&mut rng)).expect("unit"),
            );
            let dest = random_point(&mut rng, 100.0);
            let projected = project_dest_one_plane(dest, &plane, &cfg);
            worst = worst.max((plane.signed_distance(projected) - cfg.long_radius()).abs());
        }
        (
            opts.trials > 0 && worst <= PROJECTION_TOLERANCE,
            format!(
                "{} pairs, max |dist − (1+ε)| = {worst:.2e} (≤ {PROJECTION_TOLERANCE:e})",
                opts.trials
            ),
        )
    })
}

/// Generates a random sweep aimed near a random triangle. The source is
/// clear of the triangle.
pub fn random_sweep_case(rng: &mut impl Rng) -> (Vector3, Vector3, Triangle) {
    loop {
        let Ok(tri) = Triangle::new(
            random_point(rng, 3.0),
            random_point(rng, 3.0),
            random_point(rng, 3.0),
        ) else {
            continue;
        };
        if (tri.b - tri.a).cross(tri.c - tri.a).length() < 0.2 {
            continue;
        }
        // Aim at a point in or around the triangle so edges and vertices get hit too.
        let (u, v) = (rng.gen_range(-0.3..1.3), rng.gen_range(-0.3..1.3));
        let target = tri.a
            + (tri.b - tri.a) * u
            + (tri.c - tri.a) * (v * (1.0 - u).abs().min(1.0))
            + random_unit(rng) * rng.gen_range(0.0..1.2);
        let dir = random_unit(rng);
        let back = rng.gen_range(1.5..6.0);
        let source = target - dir * back;
        if oracle::point_triangle_distance(source, &tri) < 1.0 + 1e-6 {
            continue;
        }
        let vel = dir * back * rng.gen_range(0.8..2.0);
        return (source, vel, tri);
    }
}

/// Criterion 7.
pub fn detection_oracle(opts: &VerifyOptions) -> CheckOutcome {
    timed(7, "detection oracle", || {
        let mut rng = rng(opts, 7);
        let mut hits = 0;
        let mut misses_agreed = 0;
        let mut worst_t: Real = 0.0;
        let mut worst_tangency: Real = 0.0;
        let mut disagreements = 0;
        let mut attempts = 0;
        while hits < opts.trials && attempts < opts.trials * 100 {
            attempts += 1;
            let (source, vel, tri) = random_sweep_case(&mut rng);
            let fast = sweep_unit_sphere_triangle(source, vel, &tri);
            match bisection_time_of_impact(source, vel, &tri, 1e-12) {
                OracleSweep::Hit { t, min_gap } if min_gap < -1e-6 => {
                    hits += 1;
                    match fast {
                        Some(c) => {
                            worst_t = worst_t.max((c.t - t).abs());
                            let centre = source + vel * c.t;
                            worst_tangency =
                                worst_tangency.max((centre.distance(c.point) - 1.0).abs());
                        }
                        None => disagreements += 1,
                    }
                }
                OracleSweep::Miss { min_gap } if min_gap > 1e-6 => {
                    misses_agreed += usize::from(fast.is_none());
                    disagreements += usize::from(fast.is_some());
                }
                // Grazing within 1e-6 of tangency: either answer is acceptable.
                _ => {}
            }
        }
        (
            hits >= opts.trials && disagreements == 0 && worst_t <= DETECTION_T_TOLERANCE && worst_tangency <= TANGENCY_TOLERANCE,
            format!(
                "{hits} hitting sweeps: max |t − t_bisection| = {worst_t:.2e} (≤ {DETECTION_T_TOLERANCE:e}), max tangency error {worst_tangency:.2e} (≤ {TANGENCY_TOLERANCE:e}); {misses_agreed} clear misses agreed, {disagreements} hit/miss disagreements"
            ),
        )
    })
}

pub const BROADPHASE_SOUP_COUNT: usize = 500;

/// Criterion 8.
pub fn broadphase_soundness(opts: &VerifyOptions) -> CheckOutcome {
    timed(8, "broadphase soundness", || {
        let mut rng = rng(opts, 8);
        let mut mismatches = 0;
        let mut missing = 0;
        let mut hits = 0;
        let soups = 4;
        for s in 0..soups {
            let params = MeshParams {
                n: Some(BROADPHASE_SOUP_COUNT),
                seed: Some(opts.seed ^ (0xB0 + s)),
                extent: Some(20.0),
                ..Default::default()
            };
            let world = World::build(
                builtin_mesh(BuiltinMesh::RandomSoup, &params).expect("valid soup"),
                4.0,
            )
            .expect("valid cell size");
            for _ in 0..opts.trials.div_ceil(soups as usize) {
                let source = random_point(&mut rng, 24.0);
                let vel = random_unit(&mut rng) * rng.gen_range(0.0..12.0);
                let grid = check_collision(&world, source, vel);
                let brute = check_collision_brute_force(&world, source, vel);
                hits += usize::from(brute.is_some());
                let same = match (grid, brute) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a.t == b.t && a.triangle_index == b.triangle_index,
                    _ => false,
                };
                mismatches += usize::from(!same);
                let query = sweep_aabb(source, vel);
                let candidates = world.query_candidates(&query);
                missing += oracle::brute_force_overlaps(&world, &query)
                    .iter()
                    .filter(|i| candidates.binary_search(i).is_err())
                    .count();
            }
        }
        (
            mismatches == 0 && missing == 0,
            format!(
                "{} queries over {soups} soups of {BROADPHASE_SOUP_COUNT} triangles ({hits} hits): {mismatches} grid/brute-force mismatches, {missing} missed overlaps",
                opts.trials.div_ceil(soups as usize) * soups as usize
            ),
        )
    })
}

/// Criterion 9.
pub fn quadratic_robustness(opts: &VerifyOptions) -> CheckOutcome {
    timed(9, "quadratic robustness", || {
        let mut rng = rng(opts, 9);
        let mut worst: Real = 0.0;
        let mut cases = 0;
        let mut missing = 0;
        for exponent in 0..=12 {
            for _ in 0..opts.trials.div_ceil(13).max(1) {
                let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let a: Real = rng.gen_range(0.5..2.0) * sign(&mut rng);
                let c: Real = rng.gen_range(0.5..2.0) / a.abs() * sign(&mut rng);
                let magnitude: Real = 10f64.powf(exponent as Real + rng.gen_range(0.0..1.0));
                let b = magnitude.min(1e12) * sign(&mut rng);
                if b * b - 4.0 * a * c < 0.0 {
                    continue;
                }
                cases += 1;
                let Some((t0, t1)) = robust_quadratic_roots(a, b, c) else {
                    missing += 1;
                    continue;
                };
                let small = if t0.abs() < t1.abs() { t0 } else { t1 };
                let reference = oracle::small_root_reference(a, b, c);
                worst = worst.max(((small - reference) / reference).abs());
            }
        }
        (
            cases > 0 && missing == 0 && worst <= QUADRATIC_RELATIVE_TOLERANCE,
            format!("{cases} cases with |b| ≤ 1e12, ac ≈ ±1: max relative error of small root {worst:.2e} (≤ {QUADRATIC_RELATIVE_TOLERANCE:e})"),
        )
    })
}

pub const ELLIPSOID_RADII: [Real; 3] = [2.0, 1.0, 0.5];

/// Criterion 10.
pub fn ellipsoid_round_trip(opts: &VerifyOptions) -> CheckOutcome {
    timed(10, "ellipsoid round trip", || {
        let radii = EllipsoidRadii::try_from(ELLIPSOID_RADII).expect("valid radii");
        let eps = ResponseConfig::default().very_close_dist();
        let world = World::build(
            builtin_mesh(BuiltinMesh::Floor, &MeshParams::default()).expect("floor"),
            4.0 * 2.0,
        )
        .expect("valid cell size");
        let mut sim = Simulation::new(
            &world,
            radii,
            Vector3::new(0.0, 0.0, 3.0),
            Algorithm::Improved,
            ResponseConfig::default(),
            LegacyConfig::default(),
        )
        .expect("start is clear");
        sim.step(Vector3::new(0.0, 0.0, -3.0));
        let height = sim.position().z;
        let expected = (1.0 + eps) * ELLIPSOID_RADII[2];
        let height_err = (height - expected).abs();

        let mut rng = rng(opts, 10);
        let mut worst: Real = 0.0;
        for _ in 0..opts.trials {
            let r = EllipsoidRadii::new(
                rng.gen_range(0.01..100.0),
                rng.gen_range(0.01..100.0),
                rng.gen_range(0.01..100.0),
            )
            .expect("positive radii");
            let p = random_point(&mut rng, 1e4);
            let back = from_sphere_space(to_sphere_space(p, &r), &r);
            for k in 0..3 {
                if p[k] != 0.0 {
                    worst = worst.max(((back[k] - p[k]) / p[k]).abs());
                }
            }
        }
        (
            height_err <= ELLIPSOID_HEIGHT_TOLERANCE && worst <= ROUND_TRIP_RELATIVE_TOLERANCE,
            format!(
                "radii {ELLIPSOID_RADII:?} floor drop ends at z = {height:.9} (expected {expected}, error {height_err:.1e} ≤ {ELLIPSOID_HEIGHT_TOLERANCE:e}); round trip max relative error {worst:.1e} (≤ {ROUND_TRIP_RELATIVE_TOLERANCE:e}) over {} points",
                opts.trials
            ),
        )
    })
}
