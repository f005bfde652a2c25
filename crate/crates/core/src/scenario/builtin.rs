//! Procedural test meshes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;
use crate::math::{Real, Triangle, Vector3};

/// Builtin mesh identifiers.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinMesh {
    Floor,
    ObtuseCorner,
    AcuteCorner,
    Crease,
    BoxRoom,
    RandomSoup,
}

impl BuiltinMesh {
    pub const ALL: [BuiltinMesh; 6] = [
        BuiltinMesh::Floor,
        BuiltinMesh::ObtuseCorner,
        BuiltinMesh::AcuteCorner,
        BuiltinMesh::Crease,
        BuiltinMesh::BoxRoom,
        BuiltinMesh::RandomSoup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinMesh::Floor => "floor",
            BuiltinMesh::ObtuseCorner => "obtuse_corner",
            BuiltinMesh::AcuteCorner => "acute_corner",
            BuiltinMesh::Crease => "crease",
            BuiltinMesh::BoxRoom => "box_room",
            BuiltinMesh::RandomSoup => "random_soup",
        }
    }

    /// Dihedral angle used when none is given, in degrees.
    pub fn default_angle(self) -> Real {
        match self {
            BuiltinMesh::ObtuseCorner => 135.0,
            BuiltinMesh::AcuteCorner => 5.0,
            BuiltinMesh::Crease => 120.0,
            _ => 90.0,
        }
    }
}

impl std::str::FromStr for BuiltinMesh {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, ScenarioError> {
        BuiltinMesh::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ScenarioError::UnknownBuiltin(s.to_string()))
    }
}

impl std::fmt::Display for BuiltinMesh {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters for [`builtin_mesh`]; unset fields take per-mesh defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshParams {
    /// Dihedral angle in degrees for corners and creases.
    pub angle: Option<Real>,
    /// Edge length of floors, corner half-planes and rooms.
    pub size: Option<Real>,
    /// Triangle count for `random_soup`.
    pub n: Option<usize>,
    /// Half-width of the cube `random_soup` triangles are centred in.
    pub extent: Option<Real>,
    pub seed: Option<u64>,
}

pub const DEFAULT_SIZE: Real = 100.0;
pub const DEFAULT_ROOM_SIZE: Real = 20.0;
pub const DEFAULT_SOUP_COUNT: usize = 50;
pub const DEFAULT_SOUP_EXTENT: Real = 10.0;
/// Largest vertex offset from a soup triangle's centre, per axis.
pub const SOUP_TRIANGLE_SPREAD: Real = 3.0;

/// Builds a named mesh deterministically from its parameters.
pub fn builtin_mesh(id: BuiltinMesh, params: &MeshParams) -> Result<Vec<Triangle>, ScenarioError> {
    let size = params.size.unwrap_or(match id {
        BuiltinMesh::BoxRoom => DEFAULT_ROOM_SIZE,
        _ => DEFAULT_SIZE,
    });
    if !(size > 0.0) || !size.is_finite() {
        return Err(ScenarioError::Invalid(format!(
            "mesh size must be positive, got {size}"
        )));
    }
    match id {
        BuiltinMesh::Floor => Ok(floor(size)),
        BuiltinMesh::ObtuseCorner | BuiltinMesh::AcuteCorner => {
            let angle = checked_angle(params.angle.unwrap_or(id.default_angle()))?;
            Ok(corner(angle, size))
        }
        BuiltinMesh::Crease => {
            let angle = checked_angle(params.angle.unwrap_or(id.default_angle()))?;
            Ok(crease(angle, size))
        }
        BuiltinMesh::BoxRoom => Ok(box_room(size)),
        BuiltinMesh::RandomSoup => {
            let extent = params.extent.unwrap_or(DEFAULT_SOUP_EXTENT);
            if !(extent > 0.0) || !extent.is_finite() {
                return Err(ScenarioError::Invalid(format!(
                    "extent must be positive, got {extent}"
                )));
            }
            Ok(random_soup(
                params.n.unwrap_or(DEFAULT_SOUP_COUNT),
                params.seed.unwrap_or(0),
                extent,
            ))
        }
    }
}

fn checked_angle(deg: Real) -> Result<Real, ScenarioError> {
    if deg > 0.0 && deg < 180.0 {
        Ok(deg)
    } else {
        Err(ScenarioError::InvalidAngle(deg))
    }
}

fn v(x: Real, y: Real, z: Real) -> Vector3 {
    Vector3::new(x, y, z)
}

fn tri(a: Vector3, b: Vector3, c: Vector3) -> Triangle {
    Triangle::new(a, b, c).expect("generator produced a degenerate triangle")
}

/// Triangle with the given normal side, flipping the winding if needed.
fn facing(a: Vector3, b: Vector3, c: Vector3, toward: Vector3) -> Triangle {
    let t = tri(a, b, c);
    if t.normal().dot(toward) >= 0.0 {
        t
    } else {
        tri(a, c, b)
    }
}

/// Square of side `size` in the plane z = 0, centred on the origin, facing +z.
fn floor(size: Real) -> Vec<Triangle> {
    let h = size / 2.0;
    vec![
        tri(v(-h, -h, 0.0), v(h, -h, 0.0), v(h, h, 0.0)),
        tri(v(-h, -h, 0.0), v(h, h, 0.0), v(-h, h, 0.0)),
    ]
}

/// Two half-plane triangles sharing the edge along the y axis through the
/// origin, a distance `size` long on either side. Returns the triangles and
/// the unit in-plane directions away from the edge.
fn wedge(d1: Vector3, d2: Vector3, size: Real) -> Vec<Triangle> {
    let e0 = v(0.0, -size, 0.0);
    let e1 = v(0.0, size, 0.0);
    let inside = d1 + d2;
    vec![
        facing(e0, e1, d1 * size, inside),
        facing(e0, e1, d2 * size, inside),
    ]
}

/// Horizontal floor for x < 0 plus a slope rising from the y axis so the two
/// enclose `angle_deg` degrees. Normals face into the enclosed region.
fn corner(angle_deg: Real, size: Real) -> Vec<Triangle> {
    let a = angle_deg.to_radians();
    wedge(v(-1.0, 0.0, 0.0), v(-a.cos(), 0.0, a.sin()), size)
}

/// V-shaped valley along the y axis, symmetric about +z, opening `angle_deg`.
fn crease(angle_deg: Real, size: Real) -> Vec<Triangle> {
    let h = angle_deg.to_radians() / 2.0;
    wedge(v(-h.sin(), 0.0, h.cos()), v(h.sin(), 0.0, h.cos()), size)
}

/// Closed cube of side `size` centred on the origin, every face looking in.
fn box_room(size: Real) -> Vec<Triangle> {
    let h = size / 2.0;
    let corner = |i: usize| {
        v(
            if i & 1 == 0 { -h } else { h },
            if i & 2 == 0 { -h } else { h },
            if i & 4 == 0 { -h } else { h },
        )
    };
    // Each face as four corner indices around its perimeter.
    const FACES: [[usize; 4]; 6] = [
        [0, 1, 3, 2], // z = -h
        [4, 5, 7, 6], // z = +h
        [0, 1, 5, 4], // y = -h
        [2, 3, 7, 6], // y = +h
        [0, 2, 6, 4], // x = -h
        [1, 3, 7, 5], // x = +h
    ];
    let mut out = Vec::with_capacity(12);
    for face in FACES {
        let q = face.map(corner);
        let centre = (q[0] + q[1] + q[2] + q[3]) * 0.25;
        let inward = -centre;
        out.push(facing(q[0], q[1], q[2], inward));
        out.push(facing(q[0], q[2], q[3], inward));
    }
    out
}

/// `n` random triangles centred in `[-extent, extent]³` with vertex offsets
/// up to [`SOUP_TRIANGLE_SPREAD`] per axis.
fn random_soup(n: usize, seed: u64, extent: Real) -> Vec<Triangle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let point = |rng: &mut ChaCha8Rng, r: Real| {
        v(
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
        )
    };
    while out.len() < n {
        let c = point(&mut rng, extent);
        let a = c + point(&mut rng, SOUP_TRIANGLE_SPREAD);
        let b = c + point(&mut rng, SOUP_TRIANGLE_SPREAD);
        let d = c + point(&mut rng, SOUP_TRIANGLE_SPREAD);
        // Skip slivers; they are legal but make fuzzing mostly about noise.
        if (b - a).cross(d - a).length() > 0.1 {
            out.push(tri(a, b, d));
        }
    }
    out
}
