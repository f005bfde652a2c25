use crate::detect::CollisionWorld;
use crate::error::GeomError;
use crate::math::{normalize, Plane, Real, Vector3};

use super::{FrameResult, SweepStep};

/// Default recursion cap of the original algorithm.
pub const DEFAULT_MAX_RECURSION: usize = 5;

/// Settings for [`collide_with_world_legacy`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LegacyConfig {
    very_close_dist: Real,
    max_recursion: usize,
}

impl LegacyConfig {
    pub fn new(very_close_dist: Real, max_recursion: usize) -> Result<Self, GeomError> {
        if max_recursion < 1 {
            return Err(GeomError::InvalidConfig(
                "max_recursion must be at least 1".into(),
            ));
        }
        if !(very_close_dist >= 0.0) || !very_close_dist.is_finite() {
            return Err(GeomError::InvalidConfig(format!(
                "very_close_dist must be non-negative, got {very_close_dist}"
            )));
        }
        Ok(LegacyConfig {
            very_close_dist,
            max_recursion,
        })
    }

    #[inline]
    pub fn very_close_dist(&self) -> Real {
        self.very_close_dist
    }

    #[inline]
    pub fn max_recursion(&self) -> usize {
        self.max_recursion
    }
}

impl Default for LegacyConfig {
    fn default() -> Self {
        LegacyConfig {
            very_close_dist: super::DEFAULT_VERY_CLOSE_DIST,
            max_recursion: DEFAULT_MAX_RECURSION,
        }
    }
}

/// The original recursive collide-and-slide, unrolled into a loop.
///
/// Only the most recent sliding plane is remembered, and the destination is
/// projected straight onto a plane that is itself pulled back toward the
/// sphere. Known to jitter in obtuse corners and to spin until the cap in
/// acute ones; kept to reproduce both.
pub fn collide_with_world_legacy<W>(
    world: &W,
    pos: Vector3,
    vel: Vector3,
    cfg: &LegacyConfig,
) -> FrameResult
where
    W: CollisionWorld + ?Sized,
{
    let very_close = cfg.very_close_dist;
    let mut pos = pos;
    let mut vel = vel;
    let mut result = FrameResult::unobstructed(pos + vel);

    for _depth in 0..cfg.max_recursion {
        let Some(hit) = world.check_collision(pos, vel) else {
            result.final_pos = pos + vel;
            return result;
        };
        result.iterations += 1;
        result.contact_indices.push(hit.triangle_index);

        let destination = pos + vel;
        let mut new_base = pos;
        let mut intersection = hit.contact_point;
        let nearest_distance = vel.length() * hit.t;

        if nearest_distance >= very_close {
            // Any hit implies nonzero velocity.
            let dir = match normalize(vel) {
                Ok(d) => *d,
                Err(_) => break,
            };
            new_base = pos + dir * (nearest_distance - very_close);
            intersection -= dir * very_close;
        }

        let Ok(normal) = normalize(new_base - intersection) else {
            pos = new_base;
            break;
        };
        let plane = Plane::new(intersection, normal);
        result.planes_computed += 1;
        if result.planes.len() == 2 {
            result.planes.remove(0);
        }
        result.planes.push(plane);

        let new_destination = destination - *normal * plane.signed_distance(destination);
        let new_vel = new_destination - intersection;

        pos = new_base;
        vel = new_vel;
        result.steps.push(SweepStep {
            pos,
            vel,
            dest: new_destination,
            triangle_index: hit.triangle_index,
        });
        if new_vel.length() < very_close {
            break;
        }
    }

    result.final_pos = pos;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Triangle;
    use crate::world::World;

    fn v(x: Real, y: Real, z: Real) -> Vector3 {
        Vector3::new(x, y, z)
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
    fn config_rejects_zero_cap() {
        assert!(LegacyConfig::new(0.005, 0).is_err());
        assert_eq!(LegacyConfig::default().max_recursion(), 5);
    }

    #[test]
    fn no_obstacles() {
        let r = collide_with_world_legacy(
            &World::empty(),
            v(1.0, 1.0, 1.0),
            v(2.0, 0.0, 0.0),
            &LegacyConfig::default(),
        );
        assert_eq!(r.final_pos, v(3.0, 1.0, 1.0));
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn floor_drop_stops_short_of_tangency() {
        let r = collide_with_world_legacy(
            &floor_world(),
            v(0.0, 0.0, 3.0),
            v(0.0, 0.0, -3.0),
            &LegacyConfig::default(),
        );
        assert!((r.final_pos.z - 1.005).abs() <= 1e-6, "{:?}", r.final_pos);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn slide_along_floor() {
        let r = collide_with_world_legacy(
            &floor_world(),
            v(0.0, 0.0, 2.0),
            v(3.0, 0.0, -3.0),
            &LegacyConfig::default(),
        );
        // The stand-off is measured along the motion, not the normal.
        assert!(
            (r.final_pos.z - (1.0 + 0.005 / 2f64.sqrt())).abs() < 1e-12,
            "{:?}",
            r.final_pos
        );
        assert!((r.final_pos.x - 3.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_cap_is_respected() {
        let cfg = LegacyConfig::new(0.005, 2).unwrap();
        let r =
            collide_with_world_legacy(&floor_world(), v(0.0, 0.0, 3.0), v(0.0, 0.0, -3.0), &cfg);
        assert!(r.iterations <= 2);
    }
}
