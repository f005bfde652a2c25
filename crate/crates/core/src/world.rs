//! Static triangle soup bucketed into a sparse uniform grid.

use std::collections::HashMap;

use crate::error::GeomError;
use crate::math::{Aabb, Real, Triangle, Vector3};

/// Default grid cell edge length, four unit-sphere radii.
pub const DEFAULT_CELL_SIZE: Real = 4.0;

/// Triangles whose box covers more cells than this are kept in a side list
/// that every query tests directly.
const MAX_CELLS_PER_TRIANGLE: u64 = 1 << 20;

type CellKey = (i64, i64, i64);

/// The static environment: an ordered triangle list plus a spatial hash.
#[derive(Debug, Clone)]
pub struct World {
    triangles: Vec<Triangle>,
    bounds: Vec<Aabb>,
    cells: HashMap<CellKey, Vec<u32>>,
    oversized: Vec<u32>,
    cell_size: Real,
}

impl World {
    /// Buckets `triangles` into cells of edge `cell_size`. Indices within a
    /// cell are ascending because insertion follows input order.
    pub fn build(triangles: Vec<Triangle>, cell_size: Real) -> Result<World, GeomError> {
        if !(cell_size > 0.0) || !cell_size.is_finite() {
            return Err(GeomError::InvalidCellSize(cell_size));
        }
        let bounds: Vec<Aabb> = triangles.iter().map(Triangle::aabb).collect();
        let mut world = World {
            triangles,
            bounds,
            cells: HashMap::new(),
            oversized: Vec::new(),
            cell_size,
        };
        for (index, aabb) in world.bounds.iter().enumerate() {
            let index = index as u32;
            let (lo, hi) = world.cell_range(aabb);
            if cell_count(lo, hi) > MAX_CELLS_PER_TRIANGLE {
                world.oversized.push(index);
                continue;
            }
            for key in cells_in(lo, hi) {
                world.cells.entry(key).or_default().push(index);
            }
        }
        Ok(world)
    }

    pub fn empty() -> World {
        World::build(Vec::new(), DEFAULT_CELL_SIZE).expect("default cell size is valid")
    }

    #[inline]
    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    #[inline]
    pub fn triangle(&self, index: usize) -> &Triangle {
        &self.triangles[index]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    #[inline]
    pub fn cell_size(&self) -> Real {
        self.cell_size
    }

    /// Triangle indices registered in a cell, ascending.
    pub fn cell(&self, key: (i64, i64, i64)) -> &[u32] {
        self.cells.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every triangle whose bounding box overlaps `query`, deduplicated and
    /// ascending. May include extra triangles from shared cells.
    pub fn query_candidates(&self, query: &Aabb) -> Vec<usize> {
        if self.triangles.is_empty() {
            return Vec::new();
        }
        let (lo, hi) = self.cell_range(query);
        let mut out: Vec<usize> = if cell_count(lo, hi) > self.cells.len() as u64 {
            // Huge query box: scanning occupied cells is cheaper than
            // walking the box.
            self.cells
                .iter()
                .filter(|(&(x, y, z), _)| {
                    (lo.0..=hi.0).contains(&x)
                        && (lo.1..=hi.1).contains(&y)
                        && (lo.2..=hi.2).contains(&z)
                })
                .flat_map(|(_, ids)| ids.iter().map(|&i| i as usize))
                .collect()
        } else {
            cells_in(lo, hi)
                .filter_map(|key| self.cells.get(&key))
                .flat_map(|ids| ids.iter().map(|&i| i as usize))
                .collect()
        };
        out.extend(
            self.oversized
                .iter()
                .map(|&i| i as usize)
                .filter(|&i| self.bounds[i].overlaps(query)),
        );
        out.sort_unstable();
        out.dedup();
        out
    }

    fn cell_of(&self, p: Vector3) -> CellKey {
        let f = |v: Real| {
            (v / self.cell_size)
                .floor()
                .clamp(i64::MIN as Real / 2.0, i64::MAX as Real / 2.0) as i64
        };
        (f(p.x), f(p.y), f(p.z))
    }

    fn cell_range(&self, aabb: &Aabb) -> (CellKey, CellKey) {
        (self.cell_of(aabb.min), self.cell_of(aabb.max))
    }
}

fn cell_count(lo: CellKey, hi: CellKey) -> u64 {
    let span = |a: i64, b: i64| (b.saturating_sub(a) as u64).saturating_add(1);
    span(lo.0, hi.0)
        .saturating_mul(span(lo.1, hi.1))
        .saturating_mul(span(lo.2, hi.2))
}

fn cells_in(lo: CellKey, hi: CellKey) -> impl Iterator<Item = CellKey> {
    (lo.0..=hi.0)
        .flat_map(move |x| (lo.1..=hi.1).flat_map(move |y| (lo.2..=hi.2).map(move |z| (x, y, z))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: [Real; 3], b: [Real; 3], c: [Real; 3]) -> Triangle {
        Triangle::new(a.into(), b.into(), c.into()).unwrap()
    }

    #[test]
    fn rejects_non_positive_cell_size() {
        assert!(World::build(Vec::new(), 0.0).is_err());
        assert!(World::build(Vec::new(), -1.0).is_err());
        assert!(World::build(Vec::new(), Real::NAN).is_err());
    }

    #[test]
    fn empty_world_has_no_candidates() {
        let w = World::empty();
        let everything = Aabb::new(Vector3::splat(-1e9), Vector3::splat(1e9));
        assert!(w.query_candidates(&everything).is_empty());
    }

    #[test]
    fn triangle_spanning_two_cells_is_in_both() {
        let t = tri([0.2, 0.2, 0.5], [1.8, 0.2, 0.5], [0.2, 0.8, 0.5]);
        let w = World::build(vec![t], 1.0).unwrap();
        assert_eq!(w.cell((0, 0, 0)), &[0]);
        assert_eq!(w.cell((1, 0, 0)), &[0]);
        assert!(w.cell((2, 0, 0)).is_empty());
        assert!(w.cell((0, 1, 0)).is_empty());
    }

    #[test]
    fn whole_world_box_returns_all() {
        let tris = vec![
            tri([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            tri([50.0, 0.0, 0.0], [51.0, 0.0, 0.0], [50.0, 1.0, 0.0]),
            tri([-30.0, 9.0, 2.0], [-31.0, 0.0, 0.0], [-30.0, 1.0, 0.0]),
        ];
        let w = World::build(tris, 4.0).unwrap();
        let all = Aabb::new(Vector3::splat(-100.0), Vector3::splat(100.0));
        assert_eq!(w.query_candidates(&all), vec![0, 1, 2]);
        let none = Aabb::new(Vector3::splat(200.0), Vector3::splat(201.0));
        assert!(w.query_candidates(&none).is_empty());
    }

    #[test]
    fn oversized_triangles_are_still_found() {
        let t = tri([-1e4, -1e4, 0.0], [1e4, -1e4, 0.0], [0.0, 1e4, 0.0]);
        let w = World::build(vec![t], 0.5).unwrap();
        let q = Aabb::new(Vector3::new(3.0, 3.0, -1.0), Vector3::new(4.0, 4.0, 1.0));
        assert_eq!(w.query_candidates(&q), vec![0]);
        let miss = Aabb::new(Vector3::new(3.0, 3.0, 2.0), Vector3::new(4.0, 4.0, 3.0));
        assert!(w.query_candidates(&miss).is_empty());
    }
}
