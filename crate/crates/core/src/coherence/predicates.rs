use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::graph::{Dart, TorusGraph};

use super::VertexWeights;

/// Relative zero threshold for the lifted determinants.
pub const FLAT_TOLERANCE: f64 = 1e-9;

pub fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cofactor expansion along the first row.
pub fn det4(m: [[f64; 4]; 4]) -> f64 {
    let minor = |skip: usize| -> f64 {
        let mut rows = [[0.0; 3]; 3];
        for (r, row) in m[1..].iter().enumerate() {
            let mut c = 0;
            for (j, x) in row.iter().enumerate() {
                if j != skip {
                    rows[r][c] = *x;
                    c += 1;
                }
            }
        }
        det3(rows)
    };
    (0..4)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][j] * minor(j)
        })
        .sum()
}

/// Weighted in-circle test of `q, r, s` against `p`, from displacements
/// `p → q`, `p → r`, `p → s` with rows `(Δx, Δy, ½|Δ|² + π_p − π_x)`.
/// Returns the determinant and its flatness scale.
pub fn lifted_det3(displacements: [Vec2; 3], weight_p: f64, weights: [f64; 3]) -> (f64, f64) {
    let mut rows = [[0.0; 3]; 3];
    let mut scale: f64 = 0.0;
    for i in 0..3 {
        let d = displacements[i];
        rows[i] = [d.x, d.y, 0.5 * d.norm_squared() + weight_p - weights[i]];
        let norm = (rows[i][0].powi(2) + rows[i][1].powi(2) + rows[i][2].powi(2)).sqrt();
        scale = scale.max(norm);
    }
    (det3(rows), scale.powi(3))
}

/// The same test on absolute positions, with rows `(1, x, y, ½|x|² − π)`.
pub fn lifted_det4(points: [Vec2; 4], weights: [f64; 4]) -> f64 {
    let mut rows = [[0.0; 4]; 4];
    for i in 0..4 {
        let p = points[i];
        rows[i] = [1.0, p.x, p.y, 0.5 * p.norm_squared() - weights[i]];
    }
    det4(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    Delaunay,
    Flat,
    Violated,
}

pub fn classify(det: f64, scale: f64) -> EdgeClass {
    if det.abs() <= FLAT_TOLERANCE * scale {
        EdgeClass::Flat
    } else if det > 0.0 {
        EdgeClass::Delaunay
    } else {
        EdgeClass::Violated
    }
}

/// Lifted determinant for the edge of `r`, evaluated around the tail `p` of
/// `r` with `q` and `s` the darts before and after `r` in the rotation.
pub fn local_delaunay_det_at(
    g: &TorusGraph,
    weights: &VertexWeights,
    r: Dart,
) -> Result<(f64, f64)> {
    let p = g.tail(r);
    if g.degree(p) < 3 {
        return Err(Error::DegenerateStar { vertex: p });
    }
    let darts = [g.rot_prev(r), r, g.rot_next(r)];
    let displacements = darts.map(|d| g.displacement(d));
    let heads = darts.map(|d| weights.get(g.head(d)));
    Ok(lifted_det3(displacements, weights.get(p), heads))
}

pub fn local_delaunay_det(g: &TorusGraph, weights: &VertexWeights, edge: usize) -> Result<f64> {
    local_delaunay_det_at(g, weights, Dart::reference(edge)).map(|(det, _)| det)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVerdict {
    pub edge: usize,
    pub det: f64,
    pub class: EdgeClass,
}

/// A diagonal between corners `i` and `j` of a face's boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalVerdict {
    pub face: usize,
    pub corners: (usize, usize),
    pub det: f64,
    pub class: EdgeClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelaunayVerdict {
    pub edges: Vec<EdgeVerdict>,
    pub diagonals: Vec<DiagonalVerdict>,
}

impl DelaunayVerdict {
    /// Every edge is strictly locally Delaunay and every tested diagonal of a
    /// non-triangular face is flat.
    pub fn is_delaunay(&self) -> bool {
        self.edges.iter().all(|e| e.class == EdgeClass::Delaunay)
            && self.diagonals.iter().all(|d| d.class == EdgeClass::Flat)
    }
}

/// Faces up to this degree have every diagonal tested; larger faces are
/// fanned from their lowest-index corner.
const FULL_DIAGONAL_DEGREE: usize = 8;

pub fn is_weighted_delaunay(g: &TorusGraph, weights: &VertexWeights) -> Result<DelaunayVerdict> {
    if weights.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} vertices",
            weights.len(),
            g.vertex_count()
        )));
    }
    let mut edges = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let (det, scale) = local_delaunay_det_at(g, weights, Dart::reference(e))?;
        edges.push(EdgeVerdict {
            edge: e,
            det,
            class: classify(det, scale),
        });
    }
    let mut diagonals = Vec::new();
    for face in g.faces() {
        let n = face.degree();
        if n <= 3 {
            continue;
        }
        let corners = g.face_corners(face.id);
        let pi: Vec<f64> = face
            .boundary
            .iter()
            .map(|d| weights.get(g.tail(*d)))
            .collect();
        let pairs: Vec<(usize, usize)> = if n <= FULL_DIAGONAL_DEGREE {
            (0..n)
                .flat_map(|i| (i + 2..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !(i == 0 && j == n - 1))
                .collect()
        } else {
            let base = (0..n)
                .min_by_key(|&i| g.tail(face.boundary[i]))
                .expect("nonempty face");
            (2..n - 1).map(|k| (base, (base + k) % n)).collect()
        };
        for (i, j) in pairs {
            let quad = [i, (i + 1) % n, j, (j + 1) % n];
            let p = corners[quad[0]];
            let displacements = [
                corners[quad[1]] - p,
                corners[quad[2]] - p,
                corners[quad[3]] - p,
            ];
            let (det, scale) = lifted_det3(
                displacements,
                pi[quad[0]],
                [pi[quad[1]], pi[quad[2]], pi[quad[3]]],
            );
            diagonals.push(DiagonalVerdict {
                face: face.id,
                corners: (i, j),
                det,
                class: classify(det, scale),
            });
        }
    }
    Ok(DelaunayVerdict { edges, diagonals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{IVec2, Mat2, TorusShape};
    use crate::graph::{EdgeSpec, VertexSpec};

    /// Sum over all 24 permutations.
    fn leibniz4(m: [[f64; 4]; 4]) -> f64 {
        let mut total = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                        if !distinct {
                            continue;
                        }
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                        total += sign * m[0][a] * m[1][b] * m[2][c] * m[3][d];
                    }
                }
            }
        }
        total
    }

    #[test]
    fn determinant_helpers() {
        assert_eq!(
            det3([[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 4.0]]),
            24.0
        );
        let m = [
            [1.0, 2.0, 0.0, 1.0],
            [0.0, 1.0, 3.0, 0.0],
            [2.0, 0.0, 1.0, 1.0],
            [1.0, 1.0, 0.0, 2.0],
        ];
        assert!((det4(m) - leibniz4(m)).abs() < 1e-12);
        assert!((det4(m) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn k7_edges_are_delaunay() {
        let g = fixtures::k7();
        let pi = VertexWeights::zeros(7);
        for e in 0..21 {
            assert!(local_delaunay_det(&g, &pi, e).unwrap() > 0.0);
        }
        assert!(is_weighted_delaunay(&g, &pi).unwrap().is_delaunay());
    }

    #[test]
    fn g1_long_edge_is_not_delaunay() {
        let g = fixtures::g1();
        let pi = VertexWeights::zeros(1);
        let c = g.edge_index("c").unwrap();
        assert_eq!(local_delaunay_det(&g, &pi, c).unwrap(), -1.0);
        assert!(!is_weighted_delaunay(&g, &pi).unwrap().is_delaunay());
        let pi = VertexWeights::new(vec![0.37]);
        assert!(!is_weighted_delaunay(&g, &pi).unwrap().is_delaunay());
    }

    #[test]
    fn either_endpoint_gives_the_same_sign() {
        let g = fixtures::k7();
        let pi = VertexWeights::new(vec![0.0, 0.001, -0.002, 0.0005, 0.0, 0.003, -0.001]);
        for e in 0..21 {
            let (a, _) = local_delaunay_det_at(&g, &pi, Dart::reference(e)).unwrap();
            let (b, _) = local_delaunay_det_at(&g, &pi, Dart::reversal(e)).unwrap();
            assert_eq!(a > 0.0, b > 0.0);
        }
    }

    #[test]
    fn constant_weight_shift_leaves_determinants() {
        let g = fixtures::k7();
        let pi = VertexWeights::new(vec![0.0, 0.001, -0.002, 0.0005, 0.0, 0.003, -0.001]);
        let shifted = pi.shifted(0.25);
        for e in 0..21 {
            let a = local_delaunay_det(&g, &pi, e).unwrap();
            let b = local_delaunay_det(&g, &shifted, e).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    /// Four vertices on a 2×1 grid in a torus of shape 2×1 scaled: the two
    /// square faces are cocircular quadrilaterals.
    fn square_grid() -> TorusGraph {
        let shape = TorusShape::new(Mat2::new(2.0, 0.0, 0.0, 2.0)).unwrap();
        let vertices = vec![
            VertexSpec::new("a", Vec2::new(0.0, 0.0)),
            VertexSpec::new("b", Vec2::new(1.0, 0.0)),
            VertexSpec::new("c", Vec2::new(0.0, 1.0)),
            VertexSpec::new("d", Vec2::new(1.0, 1.0)),
        ];
        let edges = vec![
            EdgeSpec::new("ab", 0, 1, IVec2::ZERO),
            EdgeSpec::new("ba", 1, 0, IVec2::new(1, 0)),
            EdgeSpec::new("cd", 2, 3, IVec2::ZERO),
            EdgeSpec::new("dc", 3, 2, IVec2::new(1, 0)),
            EdgeSpec::new("ac", 0, 2, IVec2::ZERO),
            EdgeSpec::new("ca", 2, 0, IVec2::new(0, 1)),
            EdgeSpec::new("bd", 1, 3, IVec2::ZERO),
            EdgeSpec::new("db", 3, 1, IVec2::new(0, 1)),
        ];
        TorusGraph::from_geometry(shape, vertices, edges).unwrap()
    }

    #[test]
    fn cocircular_quadrilaterals_are_flat() {
        let g = square_grid();
        assert!(g.faces().iter().all(|f| f.degree() == 4));
        let verdict = is_weighted_delaunay(&g, &VertexWeights::zeros(4)).unwrap();
        assert!(!verdict.diagonals.is_empty());
        assert!(verdict.diagonals.iter().all(|d| d.class == EdgeClass::Flat));
        assert!(verdict.is_delaunay());
        // unequal weights tilt the lifted squares
        let tilted = VertexWeights::new(vec![0.0, 0.1, 0.0, 0.0]);
        assert!(!is_weighted_delaunay(&g, &tilted).unwrap().is_delaunay());
    }

    #[test]
    fn degree_two_star_is_degenerate() {
        // G1 with its (1,0) loop subdivided at (1/2, 0)
        let shape = TorusShape::square();
        let vertices = vec![
            VertexSpec::new("p", Vec2::ZERO),
            VertexSpec::new("q", Vec2::new(0.5, 0.0)),
        ];
        let edges = vec![
            EdgeSpec::new("a0", 0, 1, IVec2::ZERO),
            EdgeSpec::new("a1", 1, 0, IVec2::new(1, 0)),
            EdgeSpec::new("b", 0, 0, IVec2::new(1, 1)),
            EdgeSpec::new("c", 0, 0, IVec2::new(2, 1)),
        ];
        let g = TorusGraph::from_geometry(shape, vertices, edges).unwrap();
        let pi = VertexWeights::zeros(2);
        assert_eq!(
            local_delaunay_det_at(&g, &pi, Dart::reversal(0)),
            Err(Error::DegenerateStar { vertex: 1 })
        );
        assert!(matches!(
            is_weighted_delaunay(&g, &pi),
            Err(Error::DegenerateStar { vertex: 1 })
        ));
    }
}
