//! Small named graphs used throughout tests, examples and benchmarks.

use crate::equilibrium::Stress;
use crate::geometry::{IVec2, Mat2, TorusShape, Vec2};
use crate::graph::{Dart, EdgeSpec, TorusGraph, VertexSpec};

/// Per-class displacements of K7 on the square torus: edges `i → i+1`,
/// `i → i+3` and `i → i+2`, with slopes 3, 2/3 and −1/2.
pub const K7_CLASS_STEPS: [(i64, i64); 3] = [(1, 3), (3, 2), (2, -1)];

/// Index offset `j − i` of each K7 edge class.
const K7_CLASS_OFFSETS: [usize; 3] = [1, 3, 2];

/// Per-class stress making K7 reciprocal on the square torus.
pub const K7_CLASS_STRESS: [f64; 3] = [4.0 / 7.0, 1.0 / 7.0, 9.0 / 7.0];

/// Seven vertices `(i/7, 3i/7 mod 1)` on the square torus, each joined to
/// all others: the intrinsic Delaunay triangulation of those points.
///
/// Edges are grouped by class (`a0..a6`, `b0..b6`, `c0..c6`), class `a` being
/// `i → i+1`, `b` being `i → i+3` and `c` being `i → i+2`.
pub fn k7() -> TorusGraph {
    let shape = TorusShape::square();
    let vertices = k7_positions()
        .into_iter()
        .enumerate()
        .map(|(i, p)| VertexSpec::new(format!("v{i}"), p))
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    for (class, name) in ["a", "b", "c"].iter().enumerate() {
        let (sx, sy) = K7_CLASS_STEPS[class];
        for i in 0..7 {
            let j = (i + K7_CLASS_OFFSETS[class]) % 7;
            // displacement minus coordinate difference, in sevenths
            let hx = (sx - (j as i64 - i as i64)) / 7;
            let hy = (sy - ((3 * j as i64) % 7 - (3 * i as i64) % 7)) / 7;
            edges.push(EdgeSpec::new(
                format!("{name}{i}"),
                i,
                j,
                IVec2::new(hx, hy),
            ));
        }
    }
    TorusGraph::from_geometry(shape, vertices, edges).expect("K7 fixture is valid")
}

pub fn k7_positions() -> Vec<Vec2> {
    (0..7)
        .map(|i| Vec2::new(i as f64 / 7.0, ((3 * i) % 7) as f64 / 7.0))
        .collect()
}

/// Class (0, 1 or 2) of a K7 edge, read off its displacement.
pub fn k7_edge_class(g: &TorusGraph, edge: usize) -> usize {
    let delta = g.displacement(Dart::reference(edge)) * 7.0;
    let k = IVec2::round(delta);
    K7_CLASS_STEPS
        .iter()
        .position(|&(x, y)| (x, y) == (k.x, k.y) || (x, y) == (-k.x, -k.y))
        .expect("edge is not a K7 class edge")
}

/// The stress `(4/7, 1/7, 9/7)` over the three K7 edge classes.
pub fn k7_class_stress(g: &TorusGraph) -> Stress {
    Stress::new(
        (0..g.edge_count())
            .map(|e| K7_CLASS_STRESS[k7_edge_class(g, e)])
            .collect(),
    )
}

/// The torus `(1/√3)·((2, −1), (0, √3))` on which the image of K7 is made of
/// equilateral triangles.
pub fn k7_equilateral_shape() -> TorusShape {
    let s = 3f64.sqrt();
    TorusShape::new(Mat2::new(2.0 / s, -1.0 / s, 0.0, 1.0)).expect("nonsingular")
}

/// One vertex with three loops of homology `(1,0)`, `(1,1)`, `(2,1)`: an
/// equilibrium graph for every stress that is not coherent.
pub fn g1() -> TorusGraph {
    gk(1)
}

/// The `k × k` cover of [`g1`]: vertices `(i/k, j/k)`, each with edges to
/// `+(1,0)/k`, `+(1,1)/k` and `+(2,1)/k`.
pub fn gk(k: usize) -> TorusGraph {
    assert!(k > 0);
    let kk = k as i64;
    let shape = TorusShape::square();
    let mut vertices = Vec::new();
    for i in 0..k {
        for j in 0..k {
            vertices.push(VertexSpec::new(
                format!("p{i}_{j}"),
                Vec2::new(i as f64 / k as f64, j as f64 / k as f64),
            ));
        }
    }
    let id = |i: i64, j: i64| (i.rem_euclid(kk) * kk + j.rem_euclid(kk)) as usize;
    let mut edges = Vec::new();
    for (name, (sx, sy)) in [("a", (1, 0)), ("b", (1, 1)), ("c", (2, 1))] {
        for i in 0..kk {
            for j in 0..kk {
                let h = IVec2::new((i + sx).div_euclid(kk), (j + sy).div_euclid(kk));
                let edge_name = if k == 1 {
                    name.to_string()
                } else {
                    format!("{name}{i}_{j}")
                };
                edges.push(EdgeSpec::new(edge_name, id(i, j), id(i + sx, j + sy), h));
            }
        }
    }
    TorusGraph::from_geometry(shape, vertices, edges).expect("Gk fixture is valid")
}

/// One vertex with two parallel loops of homology `(1,0)`, plus loops
/// `(0,1)` and `(1,1)`. The two parallel loops bound a face of zero area,
/// so the universal cover is not simple.
pub fn parallel_loops() -> TorusGraph {
    let edges = vec![
        EdgeSpec::new("a", 0, 0, IVec2::new(1, 0)),
        EdgeSpec::new("b", 0, 0, IVec2::new(1, 0)),
        EdgeSpec::new("c", 0, 0, IVec2::new(1, 1)),
        EdgeSpec::new("d", 0, 0, IVec2::new(0, 1)),
    ];
    let rotation = [
        (0, true),
        (1, true),
        (2, true),
        (3, true),
        (1, false),
        (0, false),
        (2, false),
        (3, false),
    ]
    .iter()
    .map(|&(e, fwd)| {
        if fwd {
            Dart::reference(e)
        } else {
            Dart::reversal(e)
        }
    })
    .collect();
    TorusGraph::build(
        TorusShape::square(),
        vec![VertexSpec::new("p", Vec2::ZERO)],
        edges,
        vec![rotation],
    )
    .expect("parallel-loop map is cellular")
}
