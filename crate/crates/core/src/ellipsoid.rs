//! Axis-aligned ellipsoids are handled by scaling the world so the ellipsoid
//! becomes a unit sphere, running the sphere pipeline, and scaling back.

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::math::{Real, Triangle, Vector3};

/// World-space semi-axes of an axis-aligned ellipsoid.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Real; 3]", into = "[Real; 3]")]
pub struct EllipsoidRadii {
    rx: Real,
    ry: Real,
    rz: Real,
}

impl EllipsoidRadii {
    pub const UNIT: EllipsoidRadii = EllipsoidRadii {
        rx: 1.0,
        ry: 1.0,
        rz: 1.0,
    };

    pub fn new(rx: Real, ry: Real, rz: Real) -> Result<Self, GeomError> {
        let ok = |r: Real| r > 0.0 && r.is_finite();
        if ok(rx) && ok(ry) && ok(rz) {
            Ok(EllipsoidRadii { rx, ry, rz })
        } else {
            Err(GeomError::InvalidRadii(rx, ry, rz))
        }
    }

    pub fn sphere(r: Real) -> Result<Self, GeomError> {
        EllipsoidRadii::new(r, r, r)
    }

    #[inline]
    pub fn as_vector(&self) -> Vector3 {
        Vector3::new(self.rx, self.ry, self.rz)
    }

    pub fn min_radius(&self) -> Real {
        self.rx.min(self.ry).min(self.rz)
    }

    pub fn is_unit(&self) -> bool {
        *self == EllipsoidRadii::UNIT
    }
}

impl TryFrom<[Real; 3]> for EllipsoidRadii {
    type Error = GeomError;

    fn try_from(r: [Real; 3]) -> Result<Self, GeomError> {
        EllipsoidRadii::new(r[0], r[1], r[2])
    }
}

impl From<EllipsoidRadii> for [Real; 3] {
    fn from(r: EllipsoidRadii) -> Self {
        [r.rx, r.ry, r.rz]
    }
}

/// World space to unit-sphere space. Applies equally to points and
/// displacements.
#[inline]
pub fn to_sphere_space(v: Vector3, r: &EllipsoidRadii) -> Vector3 {
    v.component_div(r.as_vector())
}

/// Unit-sphere space back to world space.
#[inline]
pub fn from_sphere_space(v: Vector3, r: &EllipsoidRadii) -> Vector3 {
    v.component_mul(r.as_vector())
}

/// Maps a world triangle into sphere space. The normal is recomputed from the
/// scaled vertices; a scaled normal is not normal to the scaled plane.
pub fn triangle_to_sphere_space(tri: &Triangle, r: &EllipsoidRadii) -> Result<Triangle, GeomError> {
    tri.map_vertices(|v| to_sphere_space(v, r))
}
