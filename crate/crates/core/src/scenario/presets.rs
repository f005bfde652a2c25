//! Default scripted motion for each builtin mesh, used by `builtin <id>`.

use super::{Algorithm, BuiltinMesh, MeshParams, MeshSource, Scenario, VelocityProgram};
use crate::ellipsoid::EllipsoidRadii;
use crate::error::ScenarioError;
use crate::math::{normalize, Real, Triangle, Vector3};
use crate::response::{DEFAULT_MAX_RECURSION, DEFAULT_VERY_CLOSE_DIST};

pub const OBTUSE_START_DISTANCE: Real = 3.0;
pub const OBTUSE_SPEED: Real = 0.5;
pub const OBTUSE_FRAMES: usize = 30;

pub const ACUTE_START_DISTANCE: Real = 40.0;
pub const ACUTE_SPEED: Real = 10.0;
pub const ACUTE_FRAMES: usize = 10;

pub const CREASE_START: Vector3 = Vector3::new(0.3, -20.0, 4.0);
pub const CREASE_VELOCITY: Vector3 = Vector3::new(-0.15, 1.0, -0.6);
pub const CREASE_FRAMES: usize = 30;

/// Start on the bisector of a two-triangle corner, `distance` from its edge,
/// and a velocity of `speed` straight back toward the edge. The distance is
/// raised if needed so the unit sphere starts clear of both faces.
pub fn corner_approach(tris: &[Triangle], distance: Real, speed: Real) -> (Vector3, Vector3) {
    let (n1, n2) = (tris[0].normal().into_inner(), tris[1].normal().into_inner());
    let bisector = normalize(n1 + n2)
        .expect("corner faces are not coplanar")
        .into_inner();
    // Distance to each face per unit travelled along the bisector.
    let clearance = bisector.dot(n1);
    let distance = distance.max(1.5 / clearance);
    (bisector * distance, -bisector * speed)
}

/// The default scenario for a builtin mesh. `params` shapes the mesh; the
/// start and velocity follow from it.
pub fn builtin_scenario(id: BuiltinMesh, params: MeshParams) -> Result<Scenario, ScenarioError> {
    let tris = super::builtin_mesh(id, &params)?;
    let (start, velocity, frames) = match id {
        BuiltinMesh::Floor => (
            Vector3::new(0.0, 0.0, 3.0),
            Vector3::new(1.0, 0.5, -1.0),
            20,
        ),
        BuiltinMesh::ObtuseCorner => {
            let (s, v) = corner_approach(&tris, OBTUSE_START_DISTANCE, OBTUSE_SPEED);
            (s, v, OBTUSE_FRAMES)
        }
        BuiltinMesh::AcuteCorner => {
            let (s, v) = corner_approach(&tris, ACUTE_START_DISTANCE, ACUTE_SPEED);
            (s, v, ACUTE_FRAMES)
        }
        BuiltinMesh::Crease => (CREASE_START, CREASE_VELOCITY, CREASE_FRAMES),
        BuiltinMesh::BoxRoom => (Vector3::ZERO, Vector3::new(2.0, 1.5, -1.0), 30),
        BuiltinMesh::RandomSoup => {
            let top = params.extent.unwrap_or(super::builtin::DEFAULT_SOUP_EXTENT)
                + super::builtin::SOUP_TRIANGLE_SPREAD;
            (
                Vector3::new(0.0, 0.0, top + 1.5),
                Vector3::new(0.4, 0.25, -1.0),
                40,
            )
        }
    };
    let seed = params.seed.unwrap_or(0);
    Ok(Scenario {
        name: id.name().to_string(),
        mesh: MeshSource::Builtin(
            id,
            MeshParams {
                seed: Some(seed),
                ..params
            },
        ),
        radii: EllipsoidRadii::UNIT,
        start,
        frames,
        velocity: VelocityProgram::Constant(velocity),
        algorithm: Algorithm::Improved,
        epsilon: DEFAULT_VERY_CLOSE_DIST,
        seed,
        cell_size: None,
        max_recursion: DEFAULT_MAX_RECURSION,
    })
}
