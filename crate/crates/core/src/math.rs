//! Vector, plane and triangle primitives plus a cancellation-safe quadratic
//! solver. Everything else in the crate is built on these.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// Floating point type used for all geometry.
pub type Real = f64;

/// Vectors at or below this length cannot be normalized.
pub const DEGENERATE_LENGTH: Real = 1e-12;

/// A point or displacement in 3D.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Real; 3]", into = "[Real; 3]")]
pub struct Vector3 {
    pub x: Real,
    pub y: Real,
    pub z: Real,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3::new(0.0, 0.0, 0.0);
    pub const X: Vector3 = Vector3::new(1.0, 0.0, 0.0);
    pub const Y: Vector3 = Vector3::new(0.0, 1.0, 0.0);
    pub const Z: Vector3 = Vector3::new(0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: Real, y: Real, z: Real) -> Self {
        Vector3 { x, y, z }
    }

    #[inline]
    pub fn splat(v: Real) -> Self {
        Vector3::new(v, v, v)
    }

    #[inline]
    pub fn dot(self, rhs: Vector3) -> Real {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    #[inline]
    pub fn cross(self, rhs: Vector3) -> Vector3 {
        Vector3::new(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    #[inline]
    pub fn length_squared(self) -> Real {
        self.dot(self)
    }

    #[inline]
    pub fn length(self) -> Real {
        self.length_squared().sqrt()
    }

    #[inline]
    pub fn distance(self, rhs: Vector3) -> Real {
        (self - rhs).length()
    }

    #[inline]
    pub fn component_mul(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x * rhs.x, self.y * rhs.y, self.z * rhs.z)
    }

    #[inline]
    pub fn component_div(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x / rhs.x, self.y / rhs.y, self.z / rhs.z)
    }

    #[inline]
    pub fn min(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x.min(rhs.x), self.y.min(rhs.y), self.z.min(rhs.z))
    }

    #[inline]
    pub fn max(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x.max(rhs.x), self.y.max(rhs.y), self.z.max(rhs.z))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the direction of `self`.
    pub fn normalize(self) -> Result<UnitVector3, GeomError> {
        normalize(self)
    }
}

impl From<[Real; 3]> for Vector3 {
    fn from(v: [Real; 3]) -> Self {
        Vector3::new(v[0], v[1], v[2])
    }
}

impl From<Vector3> for [Real; 3] {
    fn from(v: Vector3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Index<usize> for Vector3 {
    type Output = Real;

    fn index(&self, i: usize) -> &Real {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vector3 index out of range: {i}"),
        }
    }
}

impl fmt::Display for Vector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    #[inline]
    fn add(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vector3 {
    #[inline]
    fn add_assign(&mut self, rhs: Vector3) {
        *self = *self + rhs;
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    #[inline]
    fn sub(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Vector3 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vector3) {
        *self = *self - rhs;
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    #[inline]
    fn neg(self) -> Vector3 {
        Vector3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Real> for Vector3 {
    type Output = Vector3;
    #[inline]
    fn mul(self, s: Real) -> Vector3 {
        Vector3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vector3> for Real {
    type Output = Vector3;
    #[inline]
    fn mul(self, v: Vector3) -> Vector3 {
        v * self
    }
}

impl Div<Real> for Vector3 {
    type Output = Vector3;
    #[inline]
    fn div(self, s: Real) -> Vector3 {
        Vector3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// A vector of length one (within 1e-9).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct UnitVector3(Vector3);

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3(Vector3::X);
    pub const Y: UnitVector3 = UnitVector3(Vector3::Y);
    pub const Z: UnitVector3 = UnitVector3(Vector3::Z);

    #[inline]
    pub fn into_inner(self) -> Vector3 {
        self.0
    }

    #[inline]
    pub fn as_vector(&self) -> &Vector3 {
        &self.0
    }
}

impl std::ops::Deref for UnitVector3 {
    type Target = Vector3;
    fn deref(&self) -> &Vector3 {
        &self.0
    }
}

impl Neg for UnitVector3 {
    type Output = UnitVector3;
    fn neg(self) -> UnitVector3 {
        UnitVector3(-self.0)
    }
}

/// Scales `v` to unit length.
///
/// Fails with [`GeomError::DegenerateVector`] when `‖v‖ ≤ 1e-12`, so callers
/// must deal with zero velocities explicitly.
pub fn normalize(v: Vector3) -> Result<UnitVector3, GeomError> {
    let len = v.length();
    if !(len > DEGENERATE_LENGTH) || !len.is_finite() {
        return Err(GeomError::DegenerateVector { length: len });
    }
    Ok(UnitVector3(v / len))
}

/// An oriented plane given by a point on it and a unit normal.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Plane {
    pub origin: Vector3,
    pub normal: UnitVector3,
}

impl Plane {
    pub fn new(origin: Vector3, normal: UnitVector3) -> Self {
        Plane { origin, normal }
    }

    /// Positive on the side the normal points to.
    #[inline]
    pub fn signed_distance(&self, point: Vector3) -> Real {
        signed_plane_distance(self, point)
    }
}

/// `normal · (point − origin)`.
#[inline]
pub fn signed_plane_distance(plane: &Plane, point: Vector3) -> Real {
    plane.normal.dot(point - plane.origin)
}

/// Cross product magnitudes at or below this are treated as collinear.
pub const COLLINEAR_EPSILON: Real = 1e-12;

/// A static triangle with its unit normal cached at construction.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Triangle {
    pub a: Vector3,
    pub b: Vector3,
    pub c: Vector3,
    normal: UnitVector3,
}

impl Triangle {
    /// Builds a triangle, rejecting collinear vertices.
    pub fn new(a: Vector3, b: Vector3, c: Vector3) -> Result<Self, GeomError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let n = (b - a).cross(c - a);
        if !(n.length() > COLLINEAR_EPSILON) {
            return Err(GeomError::DegenerateTriangle);
        }
        let normal = normalize(n)?;
        Ok(Triangle { a, b, c, normal })
    }

    #[inline]
    pub fn normal(&self) -> UnitVector3 {
        self.normal
    }

    #[inline]
    pub fn vertices(&self) -> [Vector3; 3] {
        [self.a, self.b, self.c]
    }

    /// The three edges as `(start, end)` pairs: ab, bc, ca.
    #[inline]
    pub fn edges(&self) -> [(Vector3, Vector3); 3] {
        [(self.a, self.b), (self.b, self.c), (self.c, self.a)]
    }

    pub fn plane(&self) -> Plane {
        Plane::new(self.a, self.normal)
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::from_points(&self.vertices())
    }

    /// Barycentric weights `(u, v, w)` of the projection of `p` onto the
    /// triangle's plane, with `p ≈ u·a + v·b + w·c`.
    pub fn barycentric(&self, p: Vector3) -> (Real, Real, Real) {
        let ab = self.b - self.a;
        let ac = self.c - self.a;
        let ap = p - self.a;
        let n = ab.cross(ac);
        let nn = n.length_squared();
        let v = ap.cross(ac).dot(n) / nn;
        let w = ab.cross(ap).dot(n) / nn;
        (1.0 - v - w, v, w)
    }

    /// Whether the projection of `p` lies inside the triangle, allowing
    /// `tolerance` slack on every barycentric coordinate.
    pub fn contains_projection(&self, p: Vector3, tolerance: Real) -> bool {
        let (u, v, w) = self.barycentric(p);
        u >= -tolerance && v >= -tolerance && w >= -tolerance
    }

    /// Applies `f` to each vertex and rebuilds the triangle, recomputing the
    /// normal from the mapped vertices.
    pub fn map_vertices(&self, f: impl Fn(Vector3) -> Vector3) -> Result<Triangle, GeomError> {
        Triangle::new(f(self.a), f(self.b), f(self.c))
    }
}

/// Axis-aligned bounding box.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vector3,
    pub max: Vector3,
}

impl Aabb {
    pub fn new(min: Vector3, max: Vector3) -> Self {
        Aabb { min, max }
    }

    pub fn from_points(points: &[Vector3]) -> Self {
        let mut min = Vector3::splat(Real::INFINITY);
        let mut max = Vector3::splat(Real::NEG_INFINITY);
        for &p in points {
            min = min.min(p);
            max = max.max(p);
        }
        Aabb { min, max }
    }

    pub fn inflate(&self, margin: Vector3) -> Aabb {
        Aabb::new(self.min - margin, self.max + margin)
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb::new(self.min.min(other.min), self.max.max(other.max))
    }

    /// Closed-interval overlap on all three axes.
    pub fn overlaps(&self, other: &Aabb) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
            && self.min.z <= other.max.z
            && other.min.z <= self.max.z
    }
}

/// Real roots of `a·t² + b·t + c = 0`, ascending.
///
/// Uses `q = −(b + sign(b)·√(b² − 4ac)) / 2` with roots `q/a` and `c/q`, so
/// neither root is formed by subtracting nearly equal quantities. Returns
/// `None` when the discriminant is negative. `a` must be nonzero.
pub fn robust_quadratic_roots(a: Real, b: Real, c: Real) -> Option<(Real, Real)> {
    debug_assert!(a != 0.0, "quadratic solver called with a = 0");
    let disc = b * b - 4.0 * a * c;
    if !(disc >= 0.0) {
        return None;
    }
    if c == 0.0 {
        let other = -b / a;
        return Some(if other < 0.0 {
            (other, 0.0)
        } else {
            (0.0, other)
        });
    }
    let q = -0.5 * (b + disc.sqrt().copysign(b));
    let r0 = q / a;
    let r1 = c / q;
    Some(if r0 <= r1 { (r0, r1) } else { (r1, r0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Real, b: Real, tol: Real) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn normalize_axis_vector() {
        let n = normalize(Vector3::new(0.0, 0.0, 5.0)).unwrap();
        assert_eq!(n.into_inner(), Vector3::Z);
    }

    #[test]
    fn normalize_is_scale_invariant() {
        let expected = Vector3::splat(1.0 / 3f64.sqrt());
        for k in [1e-6, 0.5, 1.0, 7.0, 1e9] {
            let n = normalize(Vector3::splat(k)).unwrap();
            assert!((n.into_inner() - expected).length() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn normalize_rejects_tiny_vectors() {
        assert!(matches!(
            normalize(Vector3::new(0.0, 0.0, 1e-13)),
            Err(GeomError::DegenerateVector { .. })
        ));
        assert!(normalize(Vector3::ZERO).is_err());
    }

    #[test]
    fn plane_distance_sign_convention() {
        let floor = Plane::new(Vector3::ZERO, UnitVector3::Z);
        assert_eq!(
            signed_plane_distance(&floor, Vector3::new(0.0, 0.0, 3.0)),
            3.0
        );
        assert_eq!(
            signed_plane_distance(&floor, Vector3::new(4.0, -1.0, 0.0)),
            0.0
        );
        assert_eq!(
            signed_plane_distance(&floor, Vector3::new(5.0, -2.0, -1.5)),
            -1.5
        );
    }

    #[test]
    fn quadratic_factorable() {
        assert_eq!(robust_quadratic_roots(1.0, -3.0, 2.0), Some((1.0, 2.0)));
    }

    #[test]
    fn quadratic_negative_discriminant() {
        assert_eq!(robust_quadratic_roots(1.0, 0.0, 1.0), None);
    }

    #[test]
    fn quadratic_zero_constant_term() {
        assert_eq!(robust_quadratic_roots(2.0, -4.0, 0.0), Some((0.0, 2.0)));
        assert_eq!(robust_quadratic_roots(2.0, 4.0, 0.0), Some((-2.0, 0.0)));
        assert_eq!(robust_quadratic_roots(1.0, 0.0, 0.0), Some((0.0, 0.0)));
    }

    #[test]
    fn quadratic_cancellation_prone() {
        let (t0, t1) = robust_quadratic_roots(1.0, 1e8, 1.0).unwrap();
        assert!(close(t1, -1e-8, 1e-18));
        assert!(close(t0, -1e8, 1e-6));
    }

    #[test]
    fn triangle_rejects_collinear() {
        let r = Triangle::new(Vector3::ZERO, Vector3::X, Vector3::X * 2.0);
        assert_eq!(r, Err(GeomError::DegenerateTriangle));
    }

    #[test]
    fn triangle_normal_follows_winding() {
        let t = Triangle::new(Vector3::ZERO, Vector3::X, Vector3::Y).unwrap();
        assert_eq!(t.normal().into_inner(), Vector3::Z);
        let t = Triangle::new(Vector3::ZERO, Vector3::Y, Vector3::X).unwrap();
        assert_eq!(t.normal().into_inner(), -Vector3::Z);
    }

    #[test]
    fn barycentric_of_vertices_and_centroid() {
        let t = Triangle::new(Vector3::ZERO, Vector3::X, Vector3::Y).unwrap();
        let (u, v, w) = t.barycentric(Vector3::new(1.0 / 3.0, 1.0 / 3.0, 5.0));
        assert!(
            close(u, 1.0 / 3.0, 1e-15) && close(v, 1.0 / 3.0, 1e-15) && close(w, 1.0 / 3.0, 1e-15)
        );
        assert!(t.contains_projection(Vector3::X, 0.0));
        assert!(!t.contains_projection(Vector3::new(1.0, 1.0, 0.0), 1e-9));
    }

    #[test]
    fn aabb_overlap_is_closed() {
        let a = Aabb::new(Vector3::ZERO, Vector3::splat(1.0));
        let b = Aabb::new(Vector3::new(1.0, 0.0, 0.0), Vector3::splat(2.0));
        let c = Aabb::new(Vector3::new(1.5, 0.0, 0.0), Vector3::splat(2.0));
        assert!(a.overlaps(&b));
        assert!(!a.overlaps(&c));
    }
}
