//! Scripted multi-frame runs over a mesh, with per-frame trajectory records.
//!
//! A scenario file is TOML with the scenario fields as top-level keys:
//!
//! ```toml
//! name = "floor-drop"
//! frames = 1
//! algorithm = "improved"     # improved | legacy | both
//! epsilon = 0.005            # stand-off distance in unit-sphere space
//! seed = 0
//! radii = [1.0, 1.0, 1.0]    # world-space ellipsoid semi-axes
//! start = [0.0, 0.0, 3.0]    # world-space centre
//! velocity = [0.0, 0.0, -3.0]          # applied every frame, or
//! # velocities = [[0, 0, -3], ...]     # one world-space vector per frame
//! # cell_size = 4.0          # grid cell, world units (default 4 × max radius)
//! # max_recursion = 5        # legacy recursion cap
//!
//! [mesh]
//! builtin = "floor"          # or: file = "mesh.obj" (relative to this file)
//! # angle = 135.0, size = 100.0, n = 50, extent = 10.0, seed = 7
//! ```

pub mod builtin;
pub mod obj;
pub mod presets;
pub mod report;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use builtin::{builtin_mesh, BuiltinMesh, MeshParams};
pub use obj::{load_obj_mesh, parse_obj, ObjMesh};
pub use presets::{builtin_scenario, corner_approach};
pub use report::{summarize, write_records, OutputFormat, Summary};

use crate::detect::EllipsoidView;
use crate::ellipsoid::{
    from_sphere_space, to_sphere_space, triangle_to_sphere_space, EllipsoidRadii,
};
use crate::error::ScenarioError;
use crate::math::{Real, Triangle, Vector3};
use crate::oracle::min_mesh_distance;
use crate::response::{
    collide_with_world_legacy, sphere_sweep, FrameResult, LegacyConfig, ResponseConfig,
    DEFAULT_MAX_RECURSION, DEFAULT_VERY_CLOSE_DIST,
};
use crate::world::{World, DEFAULT_CELL_SIZE};

/// Which response algorithm a scenario runs.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    #[default]
    Improved,
    Legacy,
    Both,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Improved => "improved",
            Algorithm::Legacy => "legacy",
            Algorithm::Both => "both",
        }
    }

    /// The single algorithms this selection expands to.
    pub fn expand(self) -> &'static [Algorithm] {
        match self {
            Algorithm::Improved => &[Algorithm::Improved],
            Algorithm::Legacy => &[Algorithm::Legacy],
            Algorithm::Both => &[Algorithm::Improved, Algorithm::Legacy],
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, ScenarioError> {
        match s {
            "improved" => Ok(Algorithm::Improved),
            "legacy" => Ok(Algorithm::Legacy),
            "both" => Ok(Algorithm::Both),
            other => Err(ScenarioError::Invalid(format!(
                "unknown algorithm `{other}`"
            ))),
        }
    }
}

/// Where a scenario's triangles come from.
#[derive(Clone, Debug, PartialEq)]
pub enum MeshSource {
    File(PathBuf),
    Builtin(BuiltinMesh, MeshParams),
}

impl MeshSource {
    pub fn load(&self) -> Result<Vec<Triangle>, ScenarioError> {
        match self {
            MeshSource::File(path) => Ok(load_obj_mesh(path)?.triangles),
            MeshSource::Builtin(id, params) => builtin_mesh(*id, params),
        }
    }
}

/// World-space velocity commanded each frame.
#[derive(Clone, Debug, PartialEq)]
pub enum VelocityProgram {
    Constant(Vector3),
    PerFrame(Vec<Vector3>),
}

impl VelocityProgram {
    pub fn at(&self, frame: usize) -> Vector3 {
        match self {
            VelocityProgram::Constant(v) => *v,
            VelocityProgram::PerFrame(vs) => vs[frame],
        }
    }
}

/// A complete scripted run.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub mesh: MeshSource,
    pub radii: EllipsoidRadii,
    pub start: Vector3,
    pub frames: usize,
    pub velocity: VelocityProgram,
    pub algorithm: Algorithm,
    pub epsilon: Real,
    pub seed: u64,
    /// Grid cell edge in world units; `None` means four times the largest
    /// radius.
    pub cell_size: Option<Real>,
    pub max_recursion: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    mesh: MeshFile,
    #[serde(default = "unit_radii")]
    radii: EllipsoidRadii,
    start: Vector3,
    frames: usize,
    velocity: Option<Vector3>,
    velocities: Option<Vec<Vector3>>,
    #[serde(default)]
    algorithm: Algorithm,
    #[serde(default = "default_epsilon")]
    epsilon: Real,
    #[serde(default)]
    seed: u64,
    cell_size: Option<Real>,
    #[serde(default = "default_max_recursion")]
    max_recursion: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    file: Option<PathBuf>,
    builtin: Option<BuiltinMesh>,
    angle: Option<Real>,
    size: Option<Real>,
    n: Option<usize>,
    extent: Option<Real>,
    seed: Option<u64>,
}

impl MeshFile {
    fn params(&self) -> MeshParams {
        MeshParams {
            angle: self.angle,
            size: self.size,
            n: self.n,
            extent: self.extent,
            seed: self.seed,
        }
    }
}

fn unit_radii() -> EllipsoidRadii {
    EllipsoidRadii::UNIT
}

fn default_epsilon() -> Real {
    DEFAULT_VERY_CLOSE_DIST
}

fn default_max_recursion() -> usize {
    DEFAULT_MAX_RECURSION
}

impl Scenario {
    /// Parses scenario TOML. Relative mesh paths resolve against `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Scenario, ScenarioError> {
        let f: ScenarioFile = toml::from_str(text)?;
        let params = f.mesh.params();
        let mesh = match (f.mesh.file, f.mesh.builtin) {
            (Some(path), None) => {
                if params != MeshParams::default() {
                    return Err(ScenarioError::Invalid(
                        "mesh parameters only apply to builtin meshes".into(),
                    ));
                }
                MeshSource::File(if path.is_absolute() {
                    path
                } else {
                    base_dir.join(path)
                })
            }
            (None, Some(id)) => MeshSource::Builtin(
                id,
                MeshParams {
                    seed: params.seed.or(Some(f.seed)),
                    ..params
                },
            ),
            _ => {
                return Err(ScenarioError::Invalid(
                    "mesh needs exactly one of `file` or `builtin`".into(),
                ))
            }
        };
        let velocity = match (f.velocity, f.velocities) {
            (Some(v), None) => VelocityProgram::Constant(v),
            (None, Some(vs)) => VelocityProgram::PerFrame(vs),
            _ => {
                return Err(ScenarioError::Invalid(
                    "give exactly one of `velocity` or `velocities`".into(),
                ))
            }
        };
        let s = Scenario {
            name: f.name,
            mesh,
            radii: f.radii,
            start: f.start,
            frames: f.frames,
            velocity,
            algorithm: f.algorithm,
            epsilon: f.epsilon,
            seed: f.seed,
            cell_size: f.cell_size,
            max_recursion: f.max_recursion,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Scenario::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Checks the invariants that do not need the mesh.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.frames < 1 {
            return Err(ScenarioError::Invalid("frames must be at least 1".into()));
        }
        self.response_config()?;
        self.legacy_config()?;
        if !self.start.is_finite() {
            return Err(ScenarioError::Invalid("start must be finite".into()));
        }
        match &self.velocity {
            VelocityProgram::Constant(v) if !v.is_finite() => {
                return Err(ScenarioError::Invalid("velocity must be finite".into()))
            }
            VelocityProgram::PerFrame(vs) => {
                if vs.len() != self.frames {
                    return Err(ScenarioError::Invalid(format!(
                        "{} velocities given for {} frames",
                        vs.len(),
                        self.frames
                    )));
                }
                if vs.iter().any(|v| !v.is_finite()) {
                    return Err(ScenarioError::Invalid("velocities must be finite".into()));
                }
            }
            _ => {}
        }
        if let Some(c) = self.cell_size {
            if !(c > 0.0) || !c.is_finite() {
                return Err(ScenarioError::Invalid(format!(
                    "cell_size must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }

    pub fn response_config(&self) -> Result<ResponseConfig, ScenarioError> {
        Ok(ResponseConfig::with_epsilon(self.epsilon)?)
    }

    pub fn legacy_config(&self) -> Result<LegacyConfig, ScenarioError> {
        Ok(LegacyConfig::new(self.epsilon, self.max_recursion)?)
    }

    pub fn cell_size(&self) -> Real {
        self.cell_size.unwrap_or_else(|| {
            let r = self.radii.as_vector();
            DEFAULT_CELL_SIZE * r.x.max(r.y).max(r.z)
        })
    }

    /// Commanded world-space speed for each frame.
    pub fn commanded_speeds(&self) -> Vec<Real> {
        (0..self.frames)
            .map(|f| self.velocity.at(f).length())
            .collect()
    }
}

/// One row of output: the state after a frame.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub frame: usize,
    /// World-space centre after the frame.
    pub position: Vector3,
    pub iterations: usize,
    /// Sphere-space distance from the centre to the nearest triangle, by
    /// exhaustive search.
    pub min_mesh_distance: Real,
    /// World-space distance moved this frame.
    pub displacement: Real,
    pub planes_hit: usize,
}

/// Frame-by-frame driver for one algorithm over a shared world.
pub struct Simulation<'a> {
    view: EllipsoidView<'a>,
    /// Triangles in sphere space, for the exhaustive distance audit.
    audit_triangles: Vec<Triangle>,
    algorithm: Algorithm,
    response: ResponseConfig,
    legacy: LegacyConfig,
    /// Current centre in sphere space.
    pos: Vector3,
}

impl<'a> Simulation<'a> {
    /// `start` is in world space. Fails if the start penetrates the mesh.
    pub fn new(
        world: &'a World,
        radii: EllipsoidRadii,
        start: Vector3,
        algorithm: Algorithm,
        response: ResponseConfig,
        legacy: LegacyConfig,
    ) -> Result<Self, ScenarioError> {
        assert!(
            algorithm != Algorithm::Both,
            "a simulation runs a single algorithm"
        );
        let audit_triangles: Vec<Triangle> = world
            .triangles()
            .iter()
            .filter_map(|t| triangle_to_sphere_space(t, &radii).ok())
            .collect();
        let pos = to_sphere_space(start, &radii);
        let distance = min_mesh_distance(pos, &audit_triangles);
        if distance < 1.0 - 1e-6 {
            return Err(ScenarioError::PenetratingStart { distance });
        }
        Ok(Simulation {
            view: EllipsoidView::new(world, radii),
            audit_triangles,
            algorithm,
            response,
            legacy,
            pos,
        })
    }

    /// Current centre in sphere space.
    pub fn sphere_position(&self) -> Vector3 {
        self.pos
    }

    /// Current centre in world space.
    pub fn position(&self) -> Vector3 {
        from_sphere_space(self.pos, &self.view.radii)
    }

    pub fn sphere_triangles(&self) -> &[Triangle] {
        &self.audit_triangles
    }

    /// Advances one frame by a world-space velocity. The returned result is
    /// in sphere space.
    pub fn step(&mut self, world_vel: Vector3) -> FrameResult {
        let vel = to_sphere_space(world_vel, &self.view.radii);
        let r = match self.algorithm {
            Algorithm::Improved => sphere_sweep(&self.view, self.pos, vel, &self.response),
            Algorithm::Legacy => collide_with_world_legacy(&self.view, self.pos, vel, &self.legacy),
            Algorithm::Both => unreachable!(),
        };
        self.pos = r.final_pos;
        r
    }

    /// Sphere-space distance from the current centre to the mesh.
    pub fn min_mesh_distance(&self) -> Real {
        min_mesh_distance(self.pos, &self.audit_triangles)
    }
}

/// Output of [`run_scenario`]: one record stream per algorithm run.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioRun {
    pub streams: Vec<(Algorithm, Vec<TrajectoryRecord>)>,
}

impl ScenarioRun {
    pub fn records(&self, algorithm: Algorithm) -> Option<&[TrajectoryRecord]> {
        self.streams
            .iter()
            .find(|(a, _)| *a == algorithm)
            .map(|(_, r)| r.as_slice())
    }
}

pub fn build_world(s: &Scenario) -> Result<World, ScenarioError> {
    Ok(World::build(s.mesh.load()?, s.cell_size())?)
}

/// Runs every frame of `s` for each selected algorithm.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioRun, ScenarioError> {
    s.validate()?;
    let world = build_world(s)?;
    run_scenario_in(s, &world)
}

/// Like [`run_scenario`] with a prebuilt world.
pub fn run_scenario_in(s: &Scenario, world: &World) -> Result<ScenarioRun, ScenarioError> {
    let response = s.response_config()?;
    let legacy = s.legacy_config()?;
    let mut streams = Vec::new();
    for &algorithm in s.algorithm.expand() {
        let mut sim = Simulation::new(world, s.radii, s.start, algorithm, response, legacy)?;
        let mut records = Vec::with_capacity(s.frames);
        let mut prev = sim.position();
        for frame in 0..s.frames {
            let r = sim.step(s.velocity.at(frame));
            let position = sim.position();
            records.push(TrajectoryRecord {
                frame,
                position,
                iterations: r.iterations,
                min_mesh_distance: sim.min_mesh_distance(),
                displacement: position.distance(prev),
                planes_hit: r.planes_computed,
            });
            prev = position;
        }
        streams.push((algorithm, records));
    }
    Ok(ScenarioRun { streams })
}
