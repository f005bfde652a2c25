//! Collide-and-slide response: the bounded three-iteration algorithm and the
//! older recursive one kept for comparison.

mod improved;
mod legacy;

pub use improved::{
    crease_response, near_and_touch_points, project_dest_one_plane, sliding_plane, sphere_sweep,
    ResponseConfig, DEFAULT_MIN_VELOCITY, DEFAULT_VERY_CLOSE_DIST, PARALLEL_PLANE_EPSILON,
};
pub use legacy::{collide_with_world_legacy, LegacyConfig, DEFAULT_MAX_RECURSION};

use crate::math::{Plane, Vector3};

/// State after one detection round within a frame.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SweepStep {
    /// Sphere centre after advancing to the near point.
    pub pos: Vector3,
    /// Remaining velocity handed to the next round.
    pub vel: Vector3,
    /// Target centre handed to the next round.
    pub dest: Vector3,
    pub triangle_index: usize,
}

/// Outcome of moving a sphere for one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameResult {
    pub final_pos: Vector3,
    /// Detection calls that reported a hit.
    pub iterations: usize,
    /// Sliding planes that constrain the end of the frame (at most two).
    pub planes: Vec<Plane>,
    /// Sliding planes computed during the frame, including replaced ones.
    pub planes_computed: usize,
    /// Triangle hit by each colliding detection call, in order.
    pub contact_indices: Vec<usize>,
    /// Per-hit state, in order.
    pub steps: Vec<SweepStep>,
}

impl FrameResult {
    fn unobstructed(final_pos: Vector3) -> Self {
        FrameResult {
            final_pos,
            iterations: 0,
            planes: Vec::new(),
            planes_computed: 0,
            contact_indices: Vec::new(),
            steps: Vec::new(),
        }
    }
}
