use crate::detect::CollisionWorld;
use crate::error::GeomError;
use crate::math::{normalize, Plane, Real, Vector3};

use super::{FrameResult, SweepStep};

/// Default stand-off distance, 0.5% of the unit radius.
pub const DEFAULT_VERY_CLOSE_DIST: Real = 0.005;

/// Default remaining-velocity length below which a frame ends.
pub const DEFAULT_MIN_VELOCITY: Real = 1e-9;

/// Two sliding planes whose normals' cross product is at most this long are
/// treated as the same constraint.
pub const PARALLEL_PLANE_EPSILON: Real = 1e-6;

/// Tolerances for [`sphere_sweep`], in unit-sphere space.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ResponseConfig {
    very_close_dist: Real,
    min_velocity: Real,
}

impl ResponseConfig {
    /// `very_close_dist` must lie in `(0, 0.1)` and `min_velocity` must be
    /// non-negative.
    pub fn new(very_close_dist: Real, min_velocity: Real) -> Result<Self, GeomError> {
        if !(very_close_dist > 0.0 && very_close_dist < 0.1) {
            return Err(GeomError::InvalidConfig(format!(
                "very_close_dist must be in (0, 0.1), got {very_close_dist}"
            )));
        }
        if !(min_velocity >= 0.0) || !min_velocity.is_finite() {
            return Err(GeomError::InvalidConfig(format!(
                "min_velocity must be non-negative, got {min_velocity}"
            )));
        }
        Ok(ResponseConfig {
            very_close_dist,
            min_velocity,
        })
    }

    pub fn with_epsilon(very_close_dist: Real) -> Result<Self, GeomError> {
        ResponseConfig::new(very_close_dist, DEFAULT_MIN_VELOCITY)
    }

    #[inline]
    pub fn very_close_dist(&self) -> Real {
        self.very_close_dist
    }

    #[inline]
    pub fn min_velocity(&self) -> Real {
        self.min_velocity
    }

    /// Distance kept between a projected destination and its sliding plane.
    #[inline]
    pub fn long_radius(&self) -> Real {
        1.0 + self.very_close_dist
    }
}

impl Default for ResponseConfig {
    fn default() -> Self {
        ResponseConfig {
            very_close_dist: DEFAULT_VERY_CLOSE_DIST,
            min_velocity: DEFAULT_MIN_VELOCITY,
        }
    }
}

/// Returns `(touch, near)`: the centre at first contact, and the centre
/// pulled back by `very_close_dist` along the motion, never behind `source`.
pub fn near_and_touch_points(
    source: Vector3,
    vel: Vector3,
    t: Real,
    cfg: &ResponseConfig,
) -> Result<(Vector3, Vector3), GeomError> {
    let dir = normalize(vel)?;
    let touch = source + vel * t;
    let distance = vel.length() * t;
    let short = (distance - cfg.very_close_dist).max(0.0);
    let near = if short > 0.0 {
        source + *dir * short
    } else {
        source
    };
    Ok((touch, near))
}

/// Plane through the contact point, facing the sphere centre at contact.
pub fn sliding_plane(touch: Vector3, contact: Vector3) -> Result<Plane, GeomError> {
    Ok(Plane::new(contact, normalize(touch - contact)?))
}

/// Moves `dest` along the plane normal until it sits `1 + ε` in front of the
/// plane.
pub fn project_dest_one_plane(dest: Vector3, plane: &Plane, cfg: &ResponseConfig) -> Vector3 {
    dest - *plane.normal * (plane.signed_distance(dest) - cfg.long_radius())
}

/// Restricts the remaining motion to the line where two sliding planes meet.
/// Returns `(new_vel, new_dest)`.
pub fn crease_response(
    dest: Vector3,
    near: Vector3,
    first: &Plane,
    second: &Plane,
) -> Result<(Vector3, Vector3), GeomError> {
    let crease = normalize(first.normal.cross(*second.normal))?;
    let signed = (dest - near).dot(*crease);
    let new_vel = *crease * signed;
    Ok((new_vel, near + new_vel))
}

/// Moves a unit sphere from `pos` by `vel` for one frame, sliding along
/// whatever it hits.
///
/// Runs at most three detection rounds. The first hit constrains motion to
/// one sliding plane, the second to the crease between two planes, and a
/// third stops the sphere at its near point. Position, velocity and
/// destination are all carried between rounds; the destination is never
/// rebuilt as `pos + vel` after a projection.
pub fn sphere_sweep<W>(world: &W, pos: Vector3, vel: Vector3, cfg: &ResponseConfig) -> FrameResult
where
    W: CollisionWorld + ?Sized,
{
    let mut pos = pos;
    let mut vel = vel;
    let mut dest = pos + vel;
    let mut result = FrameResult::unobstructed(dest);
    let mut first_plane: Option<Plane> = None;

    for i in 0..3 {
        if !(vel.length() > cfg.min_velocity) {
            result.final_pos = dest;
            return result;
        }
        let Some(hit) = world.check_collision(pos, vel) else {
            result.final_pos = dest;
            return result;
        };
        result.iterations += 1;
        result.contact_indices.push(hit.triangle_index);

        let Ok((touch, near)) = near_and_touch_points(pos, vel, hit.t, cfg) else {
            break;
        };
        pos = near;

        if i < 2 {
            let Ok(plane) = sliding_plane(touch, hit.contact_point) else {
                break;
            };
            result.planes_computed += 1;
            match first_plane {
                Some(first)
                    if first.normal.cross(*plane.normal).length() > PARALLEL_PLANE_EPSILON =>
                {
                    match crease_response(dest, pos, &first, &plane) {
                        Ok((new_vel, new_dest)) => {
                            vel = new_vel;
                            dest = new_dest;
                        }
                        Err(_) => break,
                    }
                    result.planes = vec![first, plane];
                }
                _ => {
                    // First contact, or a second plane parallel to the first:
                    // the newest plane is the only constraint.
                    dest = project_dest_one_plane(dest, &plane, cfg);
                    vel = dest - pos;
                    first_plane = Some(plane);
                    result.planes = vec![plane];
                }
            }
        } else {
            // Three planes leave no freedom; the near point is final.
            vel = Vector3::ZERO;
            dest = pos;
        }
        result.steps.push(SweepStep {
            pos,
            vel,
            dest,
            triangle_index: hit.triangle_index,
        });
    }

    result.final_pos = pos;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{Triangle, UnitVector3};
    use crate::world::World;

    fn v(x: Real, y: Real, z: Real) -> Vector3 {
        Vector3::new(x, y, z)
    }

    fn cfg() -> ResponseConfig {
        ResponseConfig::default()
    }

    fn floor_world() -> World {
        let tris = vec![
            Triangle::new(
                v(-50.0, -50.0, 0.0),
                v(50.0, -50.0, 0.0),
                v(50.0, 50.0, 0.0),
            )
            .unwrap(),
            Triangle::new(
                v(-50.0, -50.0, 0.0),
                v(50.0, 50.0, 0.0),
                v(-50.0, 50.0, 0.0),
            )
            .unwrap(),
        ];
        World::build(tris, 4.0).unwrap()
    }

    #[test]
    fn config_bounds() {
        assert!(ResponseConfig::new(0.0, 0.0).is_err());
        assert!(ResponseConfig::new(0.1, 0.0).is_err());
        assert!(ResponseConfig::new(0.01, -1.0).is_err());
        assert!(ResponseConfig::new(0.01, 0.0).is_ok());
    }

    #[test]
    fn near_and_touch_on_floor_drop() {
        let (touch, near) =
            near_and_touch_points(v(0.0, 0.0, 3.0), v(0.0, 0.0, -3.0), 2.0 / 3.0, &cfg()).unwrap();
        assert!((touch - v(0.0, 0.0, 1.0)).length() < 1e-15);
        assert!((near - v(0.0, 0.0, 1.005)).length() < 1e-15);
    }

    #[test]
    fn near_point_clamps_to_source() {
        let src = v(1.0, 2.0, 3.0);
        let (_, near) = near_and_touch_points(src, v(0.0, 0.001, 0.0), 1.0, &cfg()).unwrap();
        assert_eq!(near, src);
        let (touch, near) = near_and_touch_points(src, v(0.0, 4.0, 0.0), 0.0, &cfg()).unwrap();
        assert_eq!(touch, src);
        assert_eq!(near, src);
    }

    #[test]
    fn near_and_touch_rejects_zero_velocity() {
        assert!(near_and_touch_points(Vector3::ZERO, Vector3::ZERO, 0.5, &cfg()).is_err());
    }

    #[test]
    fn sliding_plane_face_and_edge() {
        let p = sliding_plane(v(0.0, 0.0, 1.0), Vector3::ZERO).unwrap();
        assert_eq!(p.origin, Vector3::ZERO);
        assert_eq!(p.normal.into_inner(), Vector3::Z);
        let touch = v(0.0, 0.6, 0.8);
        let p = sliding_plane(touch, Vector3::ZERO).unwrap();
        assert!((p.normal.into_inner() - touch).length() < 1e-15);
        assert!((p.signed_distance(touch) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_plane_projection() {
        let floor = Plane::new(Vector3::ZERO, UnitVector3::Z);
        assert_eq!(
            project_dest_one_plane(Vector3::ZERO, &floor, &cfg()),
            v(0.0, 0.0, 1.005)
        );
        assert_eq!(
            project_dest_one_plane(v(3.0, 4.0, -2.0), &floor, &cfg()),
            v(3.0, 4.0, 1.005)
        );
        let fixed = v(7.0, -1.0, 1.005);
        assert_eq!(project_dest_one_plane(fixed, &floor, &cfg()), fixed);
    }

    #[test]
    fn crease_of_floor_and_wall() {
        let floor = Plane::new(Vector3::ZERO, UnitVector3::Z);
        let wall = Plane::new(Vector3::ZERO, UnitVector3::Y);
        let near = v(0.0, 1.005, 1.005);
        // Crease is Z × Y = -X.
        let (vel, dest) = crease_response(near + v(-2.0, -1.0, -1.0), near, &floor, &wall).unwrap();
        assert_eq!(vel, v(-2.0, 0.0, 0.0));
        assert_eq!(dest, near + v(-2.0, 0.0, 0.0));
        let (vel, dest) = crease_response(near + v(0.0, 3.0, -1.0), near, &floor, &wall).unwrap();
        assert_eq!(vel.length(), 0.0);
        assert_eq!(dest, near);
    }

    #[test]
    fn no_obstacles_moves_freely() {
        let r = sphere_sweep(&World::empty(), v(1.0, 2.0, 3.0), v(0.5, 0.5, 0.5), &cfg());
        assert_eq!(r.final_pos, v(1.5, 2.5, 3.5));
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn zero_velocity_stays_put() {
        let r = sphere_sweep(&floor_world(), v(0.0, 0.0, 1.2), Vector3::ZERO, &cfg());
        assert_eq!(r.final_pos, v(0.0, 0.0, 1.2));
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn floor_drop_settles_at_long_radius() {
        let r = sphere_sweep(&floor_world(), v(0.0, 0.0, 3.0), v(0.0, 0.0, -3.0), &cfg());
        assert!(
            (r.final_pos - v(0.0, 0.0, 1.005)).length() < 1e-12,
            "{:?}",
            r.final_pos
        );
        assert_eq!(r.iterations, 1);
        assert_eq!(r.planes.len(), 1);
    }

    #[test]
    fn oblique_floor_slide_keeps_tangent_motion() {
        let r = sphere_sweep(&floor_world(), v(0.0, 0.0, 2.0), v(3.0, 0.0, -3.0), &cfg());
        assert_eq!(r.iterations, 1);
        assert!((r.final_pos.z - 1.005).abs() < 1e-12);
        assert!((r.final_pos.x - 3.0).abs() < 1e-12);
    }

    #[test]
    fn crease_step_consumes_projected_destination() {
        // Floor plus a wall at x = 5 facing -x; slide diagonally into both.
        let wall = [
            Triangle::new(
                v(5.0, -50.0, -10.0),
                v(5.0, 50.0, 50.0),
                v(5.0, 50.0, -10.0),
            )
            .unwrap(),
            Triangle::new(
                v(5.0, -50.0, -10.0),
                v(5.0, -50.0, 50.0),
                v(5.0, 50.0, 50.0),
            )
            .unwrap(),
        ];
        let mut tris = floor_world().triangles().to_vec();
        tris.extend(wall);
        let world = World::build(tris, 4.0).unwrap();
        let r = sphere_sweep(&world, v(2.0, 0.0, 2.0), v(6.0, 3.0, -3.0), &cfg());
        assert!(r.iterations >= 2, "{r:?}");
        let (first, second) = (r.steps[0], r.steps[1]);
        let n1 = r.planes[0].normal;
        let n2 = r.planes[1].normal;
        let crease = normalize(n1.cross(*n2)).unwrap();
        let expected = *crease * (first.dest - second.pos).dot(*crease);
        assert_eq!(second.vel, expected);
        assert!(second.vel.dot(*n1).abs() <= 1e-9 * second.vel.length());
        assert!(second.vel.dot(*n2).abs() <= 1e-9 * second.vel.length());
        assert!((r.final_pos.y - 3.0).abs() < 0.05);
    }
}
