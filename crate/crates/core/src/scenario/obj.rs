//! Minimal Wavefront OBJ reader: `v` and `f` records only.

use std::path::Path;

use crate::error::ScenarioError;
use crate::math::{Triangle, Vector3};

/// Triangles read from an OBJ file.
#[derive(Debug, Clone, Default)]
pub struct ObjMesh {
    pub triangles: Vec<Triangle>,
    /// Faces (after fan triangulation) dropped for collinear vertices.
    pub degenerate_skipped: usize,
}

pub fn load_obj_mesh(path: impl AsRef<Path>) -> Result<ObjMesh, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_obj(&text)
}

/// Parses OBJ text. Face indices are 1-based; negative indices count back
/// from the most recent vertex. Polygons are fanned from their first vertex.
/// Everything other than `v` and `f` is ignored.
pub fn parse_obj(text: &str) -> Result<ObjMesh, ScenarioError> {
    let mut vertices: Vec<Vector3> = Vec::new();
    let mut mesh = ObjMesh::default();

    for (line_no, raw) in text.lines().enumerate() {
        let line = line_no + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut fields = content.split_whitespace();
        match fields.next() {
            Some("v") => {
                let mut coord = || -> Result<f64, ScenarioError> {
                    let tok = fields
                        .next()
                        .ok_or_else(|| err(line, "vertex needs three coordinates"))?;
                    let x: f64 = tok
                        .parse()
                        .map_err(|_| err(line, &format!("bad coordinate `{tok}`")))?;
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(err(line, &format!("non-finite coordinate `{tok}`")))
                    }
                };
                let (x, y, z) = (coord()?, coord()?, coord()?);
                vertices.push(Vector3::new(x, y, z));
            }
            Some("f") => {
                let indices = fields
                    .map(|tok| resolve_index(tok, vertices.len(), line))
                    .collect::<Result<Vec<_>, _>>()?;
                if indices.len() < 3 {
                    return Err(err(line, "face needs at least three vertices"));
                }
                for k in 1..indices.len() - 1 {
                    let (a, b, c) = (indices[0], indices[k], indices[k + 1]);
                    match Triangle::new(vertices[a], vertices[b], vertices[c]) {
                        Ok(t) => mesh.triangles.push(t),
                        Err(_) => mesh.degenerate_skipped += 1,
                    }
                }
            }
            _ => {}
        }
    }
    Ok(mesh)
}

/// Accepts `i`, `i/t`, `i//n` and `i/t/n`; only the position index is used.
fn resolve_index(tok: &str, count: usize, line: usize) -> Result<usize, ScenarioError> {
    let head = tok.split('/').next().unwrap_or("");
    let i: i64 = head
        .parse()
        .map_err(|_| err(line, &format!("bad face index `{tok}`")))?;
    let resolved = match i {
        0 => return Err(err(line, "face index 0 is invalid")),
        i if i > 0 => i - 1,
        i => count as i64 + i,
    };
    if resolved < 0 || resolved >= count as i64 {
        return Err(err(
            line,
            &format!("face index {i} out of range ({count} vertices)"),
        ));
    }
    Ok(resolved as usize)
}

fn err(line: usize, message: &str) -> ScenarioError {
    ScenarioError::ObjParse {
        line,
        message: message.to_string(),
    }
}
