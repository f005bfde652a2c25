use std::path::PathBuf;

use thiserror::Error;

/// Failures of the geometric primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("cannot normalize vector of length {length:e}")]
    DegenerateVector { length: f64 },
    #[error("triangle vertices are collinear")]
    DegenerateTriangle,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("cell size must be positive and finite, got {0}")]
    InvalidCellSize(f64),
    #[error("ellipsoid radii must be positive and finite, got ({0}, {1}, {2})")]
    InvalidRadii(f64, f64, f64),
    #[error("invalid response config: {0}")]
    InvalidConfig(String),
}

/// Failures while loading meshes or running scenarios.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    ObjParse { line: usize, message: String },
    #[error("unknown builtin mesh `{0}`")]
    UnknownBuiltin(String),
    #[error("angle {0}° outside (0°, 180°)")]
    InvalidAngle(f64),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("scenario file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("start position penetrates the mesh (sphere-space distance {distance})")]
    PenetratingStart { distance: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}
