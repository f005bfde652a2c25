//! Continuous detection: earliest time a unit sphere moving along a velocity
//! vector touches a static triangle.
//!
//! The triangle is tested as three kinds of feature. The set of sphere
//! centres within distance 1 of a triangle is convex, so the first time the
//! path enters it is the smallest `t` among the feature tests:
//!
//! * the face, offset by one unit along the normal on the side the sphere
//!   approaches from;
//! * each vertex, a unit sphere around it;
//! * each edge, a unit cylinder around the segment.

use crate::ellipsoid::{from_sphere_space, triangle_to_sphere_space, EllipsoidRadii};
use crate::math::{robust_quadratic_roots, Aabb, Real, Triangle, Vector3};
use crate::world::World;

/// Slack on barycentric coordinates when deciding if a face contact lies
/// inside the triangle.
pub const EDGE_TOLERANCE: Real = 1e-9;

/// Extra margin added to the swept box on every axis beyond the unit radius.
pub const SWEEP_MARGIN: Real = 1e-3;

/// First contact of a sweep with a single triangle.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Contact {
    /// Fraction of the velocity travelled before touching, in `[0, 1]`.
    pub t: Real,
    /// Point on the triangle touched by the sphere.
    pub point: Vector3,
}

/// First contact of a sweep against a whole world.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SweepHit {
    pub t: Real,
    pub contact_point: Vector3,
    pub triangle_index: usize,
}

impl SweepHit {
    /// Sphere centre at the moment of contact.
    pub fn touch_point(&self, source: Vector3, vel: Vector3) -> Vector3 {
        source + vel * self.t
    }
}

/// Sweeps a unit sphere from `source` along `vel` against `tri`.
///
/// Returns `None` when the sphere does not touch the triangle for any
/// `t ∈ [0, 1]` or only moves away from it. A start that is already within
/// unit distance and moving closer reports `t = 0` with the nearest feature
/// as the contact.
pub fn sweep_unit_sphere_triangle(
    source: Vector3,
    vel: Vector3,
    tri: &Triangle,
) -> Option<Contact> {
    let speed_sq = vel.length_squared();
    if !(speed_sq > 0.0) {
        return None;
    }
    let mut best: Option<Contact> = None;
    let mut offer = |t: Real, point: Vector3| {
        if (0.0..=1.0).contains(&t) && best.is_none_or(|b| t < b.t) {
            best = Some(Contact { t, point });
        }
    };

    if let Some(c) = face_contact(source, vel, tri) {
        offer(c.t, c.point);
    }

    for vertex in tri.vertices() {
        let w = source - vertex;
        let b = 2.0 * vel.dot(w);
        let c = w.length_squared() - 1.0;
        if let Some(t) = first_entry(speed_sq, b, c) {
            offer(t, vertex);
        }
    }

    for (p0, p1) in tri.edges() {
        let e = p1 - p0;
        let ee = e.length_squared();
        let w = source - p0;
        // Distance to the infinite line, scaled by ‖e‖²:
        // ‖e × (w + v·t)‖² = ‖e‖².
        let ev = e.cross(vel);
        let ew = e.cross(w);
        let a = ev.length_squared();
        if !(a > 1e-12 * ee * speed_sq) {
            // Moving along the edge; the vertex tests cover it.
            continue;
        }
        let b = 2.0 * ev.dot(ew);
        let c = ew.length_squared() - ee;
        let Some(t) = first_entry(a, b, c) else {
            continue;
        };
        if t > 1.0 {
            continue;
        }
        let f = e.dot(w + vel * t) / ee;
        if (0.0..=1.0).contains(&f) {
            offer(t, p0 + e * f);
        }
    }

    best
}

fn face_contact(source: Vector3, vel: Vector3, tri: &Triangle) -> Option<Contact> {
    let n = *tri.normal();
    let rate = n.dot(vel);
    if rate == 0.0 {
        return None;
    }
    let d0 = n.dot(source - tri.a);
    let side = if d0 > 0.0 {
        1.0
    } else if d0 < 0.0 {
        -1.0
    } else {
        -rate.signum()
    };
    if side * rate >= 0.0 {
        return None;
    }
    // Inside the slab already clamps to zero.
    let t = ((side - d0) / rate).max(0.0);
    if t > 1.0 {
        return None;
    }
    let center = source + vel * t;
    let point = center - n * n.dot(center - tri.a);
    tri.contains_projection(point, EDGE_TOLERANCE)
        .then_some(Contact { t, point })
}

/// Earliest `t ≥ 0` where `a·t² + b·t + c` reaches zero while decreasing,
/// with `c` the value at `t = 0`. A negative `c` means the start is already
/// inside; that counts as `t = 0` only when moving further in.
fn first_entry(a: Real, b: Real, c: Real) -> Option<Real> {
    if c < 0.0 {
        return (b < 0.0).then_some(0.0);
    }
    if b >= 0.0 {
        return None;
    }
    // c ≥ 0 and b < 0: both roots are non-negative and the smaller one is
    // c / q with q > 0.
    robust_quadratic_roots(a, b, c).map(|(t0, _)| t0)
}

/// Box enclosing a unit sphere swept from `source` to `source + vel`.
pub fn sweep_aabb(source: Vector3, vel: Vector3) -> Aabb {
    Aabb::from_points(&[source, source + vel]).inflate(Vector3::splat(1.0 + SWEEP_MARGIN))
}

/// Anything a sphere can be swept against.
pub trait CollisionWorld {
    /// Earliest contact over all triangles; ties on `t` go to the lowest
    /// triangle index.
    fn check_collision(&self, source: Vector3, vel: Vector3) -> Option<SweepHit>;
}

fn earliest<'a>(
    source: Vector3,
    vel: Vector3,
    candidates: impl IntoIterator<Item = (usize, std::borrow::Cow<'a, Triangle>)>,
) -> Option<SweepHit> {
    let mut best: Option<SweepHit> = None;
    for (index, tri) in candidates {
        if let Some(c) = sweep_unit_sphere_triangle(source, vel, &tri) {
            let better = match best {
                None => true,
                Some(b) => c.t < b.t || (c.t == b.t && index < b.triangle_index),
            };
            if better {
                best = Some(SweepHit {
                    t: c.t,
                    contact_point: c.point,
                    triangle_index: index,
                });
            }
        }
    }
    best
}

/// Grid-accelerated sweep of a unit sphere against `world`.
pub fn check_collision(world: &World, source: Vector3, vel: Vector3) -> Option<SweepHit> {
    let candidates = world.query_candidates(&sweep_aabb(source, vel));
    earliest(
        source,
        vel,
        candidates
            .into_iter()
            .map(|i| (i, std::borrow::Cow::Borrowed(world.triangle(i)))),
    )
}

/// Sweep against every triangle, bypassing the grid.
pub fn check_collision_brute_force(
    world: &World,
    source: Vector3,
    vel: Vector3,
) -> Option<SweepHit> {
    earliest(
        source,
        vel,
        world
            .triangles()
            .iter()
            .enumerate()
            .map(|(i, t)| (i, std::borrow::Cow::Borrowed(t))),
    )
}

impl CollisionWorld for World {
    fn check_collision(&self, source: Vector3, vel: Vector3) -> Option<SweepHit> {
        check_collision(self, source, vel)
    }
}

/// A world viewed through the unit-sphere transform of an ellipsoid.
///
/// Positions and velocities passed in are in sphere space. Candidate
/// triangles are transformed per query so one world can serve entities of
/// different shapes.
#[derive(Clone, Copy, Debug)]
pub struct EllipsoidView<'a> {
    pub world: &'a World,
    pub radii: EllipsoidRadii,
}

impl<'a> EllipsoidView<'a> {
    pub fn new(world: &'a World, radii: EllipsoidRadii) -> Self {
        EllipsoidView { world, radii }
    }
}

impl CollisionWorld for EllipsoidView<'_> {
    fn check_collision(&self, source: Vector3, vel: Vector3) -> Option<SweepHit> {
        if self.radii.is_unit() {
            return check_collision(self.world, source, vel);
        }
        let sphere_box = sweep_aabb(source, vel);
        let world_box = Aabb::new(
            from_sphere_space(sphere_box.min, &self.radii),
            from_sphere_space(sphere_box.max, &self.radii),
        );
        let candidates = self.world.query_candidates(&world_box);
        earliest(
            source,
            vel,
            candidates.into_iter().filter_map(|i| {
                triangle_to_sphere_space(self.world.triangle(i), &self.radii)
                    .ok()
                    .map(|t| (i, std::borrow::Cow::Owned(t)))
            }),
        )
    }
}

/// Forces every query through [`check_collision_brute_force`].
#[derive(Clone, Copy, Debug)]
pub struct BruteForce<'a>(pub &'a World);

impl CollisionWorld for BruteForce<'_> {
    fn check_collision(&self, source: Vector3, vel: Vector3) -> Option<SweepHit> {
        check_collision_brute_force(self.0, source, vel)
    }
}
