//! Shared inputs for the pipeline benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torusgraph::coherence::{oracle_weighted_delaunay, Site, SiteSet};
use torusgraph::{Mat2, TorusGraph, TorusShape, Vec2};

/// A reproducible weighted site set with `n` sites on a sheared torus.
/// Degenerate draws are skipped, so the same seed always yields the same
/// triangulation.
pub fn triangulation(n: usize, seed: u64) -> (SiteSet, TorusGraph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = TorusShape::new(Mat2::new(1.0, 0.3, -0.1, 0.9)).unwrap();
    let spread = 0.1 * shape.det() / n as f64;
    loop {
        let sites = (0..n)
            .map(|i| {
                let t = Vec2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
                Site::new(
                    format!("s{i}"),
                    shape.matrix().mul_vec(t),
                    rng.gen_range(0.0..spread),
                )
            })
            .collect();
        let set = SiteSet { shape, sites };
        if let Ok(g) = oracle_weighted_delaunay(&set) {
            return (set, g);
        }
    }
}
