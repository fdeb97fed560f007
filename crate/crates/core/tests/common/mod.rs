#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torusgraph::coherence::{oracle_weighted_delaunay, Site, SiteSet};
use torusgraph::graph::dual;
use torusgraph::{Error, IVec2, Mat2, TorusGraph, TorusShape, Vec2};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_shape(rng: &mut impl Rng) -> TorusShape {
    let m = Mat2::new(
        rng.gen_range(0.8..1.25),
        rng.gen_range(-0.35..0.35),
        rng.gen_range(-0.35..0.35),
        rng.gen_range(0.8..1.25),
    );
    TorusShape::new(m).unwrap()
}

/// Sites with weights small enough that most of them stay visible.
pub fn random_sites(rng: &mut impl Rng, n: usize) -> SiteSet {
    let shape = random_shape(rng);
    let spread = 0.1 * shape.det() / n as f64;
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
    SiteSet { shape, sites }
}

/// A weighted Delaunay triangulation from random sites, resampling
/// degenerate draws.
pub fn random_triangulation(rng: &mut impl Rng, n: usize) -> (SiteSet, TorusGraph) {
    loop {
        let set = random_sites(rng, n);
        match oracle_weighted_delaunay(&set) {
            Ok(g) => return (set, g),
            Err(Error::HiddenSite { .. }) | Err(Error::NonGeneric(_)) => continue,
            Err(e) => panic!("oracle failed: {e}"),
        }
    }
}

/// Checks G** against G: dart `y` of G** is dart `rev(y)` of G.
pub fn assert_double_dual(g: &TorusGraph) {
    let d1 = dual(g).unwrap().graph;
    let dd = dual(&d1).unwrap().graph;
    assert_eq!(dd.vertex_count(), g.vertex_count());
    assert_eq!(dd.edge_count(), g.edge_count());
    let vertex_of_face: Vec<usize> = d1.faces().iter().map(|f| g.tail(f.boundary[0])).collect();
    for y in dd.darts() {
        let x = y.rev();
        assert_eq!(vertex_of_face[dd.tail(y)], g.tail(x));
        assert_eq!(dd.rot_next(y).rev(), g.rot_next(x));
    }
    for cycle in g.fundamental_cycles() {
        let a = cycle.iter().fold(IVec2::ZERO, |s, d| s + g.homology(*d));
        let b = cycle
            .iter()
            .fold(IVec2::ZERO, |s, d| s + dd.homology(d.rev()));
        assert_eq!(a, b);
    }
}
