//! Fixtures shared by the criterion benches under `benches/`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sweepslide::scenario::{builtin_mesh, BuiltinMesh, MeshParams};
use sweepslide::{oracle, Vector3, World};

/// Random soup of `n` triangles spread so density stays roughly constant.
pub fn soup_world(n: usize, seed: u64) -> World {
    let extent = (n as f64).cbrt() * 2.5;
    let params = MeshParams {
        n: Some(n),
        seed: Some(seed),
        extent: Some(extent),
        ..Default::default()
    };
    World::build(
        builtin_mesh(BuiltinMesh::RandomSoup, &params).expect("valid soup"),
        4.0,
    )
    .expect("valid cell size")
}

/// `count` (start, velocity) pairs with clear starts inside `world`'s box.
pub fn queries(world: &World, count: usize, seed: u64) -> Vec<(Vector3, Vector3)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = world
        .triangles()
        .iter()
        .map(|t| t.aabb())
        .reduce(|a, b| a.union(&b))
        .expect("non-empty world");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = Vector3::new(
            rng.gen_range(bounds.min.x..bounds.max.x),
            rng.gen_range(bounds.min.y..bounds.max.y),
            rng.gen_range(bounds.min.z..bounds.max.z),
        );
        if oracle::min_mesh_distance(p, world.triangles()) < 1.0 {
            continue;
        }
        let v = Vector3::new(
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-4.0..4.0),
        );
        out.push((p, v));
    }
    out
}
