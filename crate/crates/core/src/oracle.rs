//! Slow reference computations used to audit the fast paths.
//!
//! Nothing here shares code with detection or the broadphase: distances come
//! from the closest point on a triangle found by Voronoi-region
//! classification, contact times from bisection on that distance, and
//! quadratic roots from Newton iteration in double-double arithmetic.

use crate::detect::{sweep_unit_sphere_triangle, SweepHit};
use crate::math::{Aabb, Real, Triangle, Vector3};
use crate::world::World;

/// Closest point on the (solid) triangle to `p`.
pub fn closest_point_on_triangle(p: Vector3, tri: &Triangle) -> Vector3 {
    let (a, b, c) = (tri.a, tri.b, tri.c);
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}

pub fn point_triangle_distance(p: Vector3, tri: &Triangle) -> Real {
    p.distance(closest_point_on_triangle(p, tri))
}

/// Distance from `p` to the nearest triangle, checking every triangle.
/// Infinite for an empty slice.
pub fn min_mesh_distance(p: Vector3, triangles: &[Triangle]) -> Real {
    triangles
        .iter()
        .map(|t| point_triangle_distance(p, t))
        .fold(Real::INFINITY, Real::min)
}

/// Result of [`bisection_time_of_impact`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum OracleSweep {
    /// Distance along the path minus one never drops below this margin.
    Miss {
        min_gap: Real,
    },
    Hit {
        t: Real,
        min_gap: Real,
    },
}

/// First `t ∈ [0, 1]` where the centre `source + vel·t` comes within unit
/// distance of `tri`, to within `resolution`.
///
/// Distance to a convex set along a line is convex, so a golden-section
/// search finds the closest approach and bisection then brackets the entry.
pub fn bisection_time_of_impact(
    source: Vector3,
    vel: Vector3,
    tri: &Triangle,
    resolution: Real,
) -> OracleSweep {
    let gap = |t: Real| point_triangle_distance(source + vel * t, tri) - 1.0;
    let g0 = gap(0.0);
    let (t_min, g_min) = golden_section_min(&gap, 0.0, 1.0, 1e-13);
    let g_min = g_min.min(g0).min(gap(1.0));
    if g0 <= 0.0 {
        return OracleSweep::Hit {
            t: 0.0,
            min_gap: g_min,
        };
    }
    let mut hi = if gap(t_min) <= 0.0 {
        t_min
    } else if gap(1.0) <= 0.0 {
        1.0
    } else {
        return OracleSweep::Miss { min_gap: g_min };
    };
    let mut lo = 0.0;
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    OracleSweep::Hit {
        t: 0.5 * (lo + hi),
        min_gap: g_min,
    }
}

fn golden_section_min(
    f: &impl Fn(Real) -> Real,
    mut a: Real,
    mut b: Real,
    tol: Real,
) -> (Real, Real) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Scans every triangle with the per-triangle sweep; returns the earliest
/// hit, ties to the lowest index.
pub fn brute_force_first_hit(
    triangles: &[Triangle],
    source: Vector3,
    vel: Vector3,
) -> Option<SweepHit> {
    let mut best: Option<SweepHit> = None;
    for (i, tri) in triangles.iter().enumerate() {
        if let Some(c) = sweep_unit_sphere_triangle(source, vel, tri) {
            if best.is_none_or(|b| c.t < b.t) {
                best = Some(SweepHit {
                    t: c.t,
                    contact_point: c.point,
                    triangle_index: i,
                });
            }
        }
    }
    best
}

/// Indices of triangles whose bounding boxes overlap `query`, by linear scan.
pub fn brute_force_overlaps(world: &World, query: &Aabb) -> Vec<usize> {
    world
        .triangles()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.aabb().overlaps(query))
        .map(|(i, _)| i)
        .collect()
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        DoubleDouble { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        DoubleDouble {
            hi: s,
            lo: b - (s - a),
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let r = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(r.hi, r.lo + t.lo)
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        let err = err + (self.hi * o.lo + self.lo * o.hi);
        Self::quick_two_sum(p, err)
    }
}

impl std::ops::Div for DoubleDouble {
    type Output = Self;

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * Self::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Self::from_f64(q2);
        let q3 = r.hi / o.hi;
        Self::quick_two_sum(q1, q2) + Self::from_f64(q3)
    }
}

/// Root of `a·t² + b·t + c` nearest `guess`, refined by Newton iteration
/// with double-double evaluation of the polynomial and its derivative.
pub fn newton_quadratic_root(a: f64, b: f64, c: f64, guess: f64) -> f64 {
    let (a, b, c) = (
        DoubleDouble::from_f64(a),
        DoubleDouble::from_f64(b),
        DoubleDouble::from_f64(c),
    );
    let two = DoubleDouble::from_f64(2.0);
    let mut t = DoubleDouble::from_f64(guess);
    for _ in 0..100 {
        let p = (a * t + b) * t + c;
        let dp = two * a * t + b;
        if dp.hi == 0.0 {
            break;
        }
        let step = p / dp;
        t = t - step;
        if step.hi.abs() <= 1e-32 * t.hi.abs().max(1e-300) {
            break;
        }
    }
    t.to_f64()
}

/// Smaller-magnitude root of `a·t² + b·t + c` via [`newton_quadratic_root`].
/// Intended for `b² ≫ |4ac|`, where the root is close to `−c/b`.
pub fn small_root_reference(a: f64, b: f64, c: f64) -> f64 {
    newton_quadratic_root(a, b, c, -c / b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Triangle {
        Triangle::new(
            Vector3::ZERO,
            Vector3::new(4.0, 0.0, 0.0),
            Vector3::new(0.0, 4.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn closest_point_regions() {
        let t = tri();
        assert_eq!(
            closest_point_on_triangle(Vector3::new(1.0, 1.0, 5.0), &t),
            Vector3::new(1.0, 1.0, 0.0)
        );
        assert_eq!(
            closest_point_on_triangle(Vector3::new(-1.0, -1.0, 0.0), &t),
            Vector3::ZERO
        );
        assert_eq!(
            closest_point_on_triangle(Vector3::new(2.0, -3.0, 1.0), &t),
            Vector3::new(2.0, 0.0, 0.0)
        );
        let p = closest_point_on_triangle(Vector3::new(3.0, 3.0, 0.0), &t);
        assert!((p - Vector3::new(2.0, 2.0, 0.0)).length() < 1e-15);
        assert_eq!(
            closest_point_on_triangle(Vector3::new(9.0, -1.0, 0.0), &t),
            Vector3::new(4.0, 0.0, 0.0)
        );
    }

    #[test]
    fn bisection_floor_drop() {
        let OracleSweep::Hit { t, .. } = bisection_time_of_impact(
            Vector3::new(1.0, 1.0, 3.0),
            Vector3::new(0.0, 0.0, -3.0),
            &tri(),
            1e-12,
        ) else {
            panic!("expected hit");
        };
        assert!((t - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn bisection_miss() {
        let r = bisection_time_of_impact(
            Vector3::new(1.0, 1.0, 3.0),
            Vector3::new(5.0, 0.0, 0.0),
            &tri(),
            1e-12,
        );
        assert!(matches!(r, OracleSweep::Miss { min_gap } if (min_gap - 2.0).abs() < 1e-9));
    }

    #[test]
    fn double_double_recovers_rounding() {
        let x = DoubleDouble::from_f64(1.0) + DoubleDouble::from_f64(1e-20);
        assert_eq!(x.hi, 1.0);
        assert_eq!(x.lo, 1e-20);
        let y = x - DoubleDouble::from_f64(1.0);
        assert_eq!(y.to_f64(), 1e-20);
        let third = DoubleDouble::from_f64(1.0) / DoubleDouble::from_f64(3.0);
        let back = third * DoubleDouble::from_f64(3.0) - DoubleDouble::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn newton_small_root() {
        // t² + 1e8 t + 1: small root is −1e-8 − 1e-24 − ...
        let r = small_root_reference(1.0, 1e8, 1.0);
        assert!((r + 1e-8).abs() < 1e-23);
        let r = newton_quadratic_root(1.0, -3.0, 2.0, 2.2);
        assert_eq!(r, 2.0);
    }
}
