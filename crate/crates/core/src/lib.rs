//! Swept unit-sphere (and axis-aligned ellipsoid) collision against a static
//! triangle soup, with collide-and-slide response.
//!
//! The usual entry point is [`sphere_sweep`]: build a [`World`] from
//! triangles, then move a sphere one frame at a time. Ellipsoids go through
//! [`EllipsoidView`], which scales the world into unit-sphere space on the
//! fly. [`collide_with_world_legacy`] is the older single-plane response,
//! kept so its corner artefacts can be compared against.

// `!(x > 0.0)` is used on purpose so NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detect;
pub mod ellipsoid;
pub mod error;
pub mod math;
pub mod oracle;
pub mod response;
pub mod scenario;
pub mod verify;
pub mod world;

pub use detect::{
    check_collision, check_collision_brute_force, sweep_unit_sphere_triangle, BruteForce,
    CollisionWorld, Contact, EllipsoidView, SweepHit,
};
pub use ellipsoid::{from_sphere_space, to_sphere_space, EllipsoidRadii};
pub use error::{GeomError, ScenarioError};
pub use math::{
    normalize, robust_quadratic_roots, signed_plane_distance, Aabb, Plane, Real, Triangle,
    UnitVector3, Vector3,
};
pub use response::{
    collide_with_world_legacy, sphere_sweep, FrameResult, LegacyConfig, ResponseConfig, SweepStep,
};
pub use world::World;
