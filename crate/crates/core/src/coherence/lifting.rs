use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{IVec2, Vec2};
use crate::graph::TorusGraph;
use crate::reciprocal::ReciprocalPair;

use super::predicates::is_weighted_delaunay;
use super::VertexWeights;

/// Agreement required between two routes to the same lifted face, and of
/// the recovered weights under lattice translation.
pub const LIFT_TOLERANCE: f64 = 1e-9;

/// Lattice translations `|a|, |b| ≤ PERIODICITY_REACH` are checked for
/// periodic weights.
const PERIODICITY_REACH: i64 = 2;

/// Piecewise-linear lift of the universal cover of a reciprocal primal.
///
/// Positions are measured from the origin vertex `o`. Over the lift of face
/// `f` translated by lattice vector `n`, the height is
/// `z(x) = gradient·x + constant`; the gradient is the dual vertex of that
/// lift up to one global translation.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftingResult {
    pub origin: usize,
    pub root_face: usize,
    /// Lattice index of the root face's lift that contains `o`.
    pub root_lift: IVec2,
    /// Gradient of the canonical lift of each face.
    pub gradients: Vec<Vec2>,
    /// Constant of the canonical lift of each face.
    pub constants: Vec<f64>,
    pub weights: VertexWeights,
    /// Global gradient shift applied after integration.
    pub translation: Vec2,
    planes: HashMap<(usize, IVec2), (Vec2, f64)>,
    origin_position: Vec2,
}

impl LiftingResult {
    /// `(gradient, constant)` over face `f` translated by `n`, if inside the
    /// integrated window.
    pub fn plane(&self, f: usize, n: IVec2) -> Option<(Vec2, f64)> {
        self.planes
            .get(&(f, n))
            .map(|(g, c)| (*g + self.translation, *c))
    }

    /// Weight of the copy of vertex `v` translated by `k`, read off any face
    /// lift incident to it.
    pub fn lifted_weight(&self, g: &TorusGraph, v: usize, k: IVec2) -> Option<f64> {
        let d = g.rotation(v)[0];
        let n = k - g.corner_shift(d);
        let x = g.position(v) + g.shape().translation(k) - self.origin_position;
        let (grad, c) = self.plane(g.left_face(d), n)?;
        Some(0.5 * x.norm_squared() - grad.dot(x) - c)
    }

    /// Same lift with every gradient shifted by `delta` (the weights change
    /// by `−delta·x`).
    pub fn translated(&self, delta: Vec2, g: &TorusGraph) -> LiftingResult {
        let mut out = self.clone();
        out.translation = self.translation + delta;
        out.gradients = self.gradients.iter().map(|x| *x + delta).collect();
        out.weights = VertexWeights::new(
            (0..g.vertex_count())
                .map(|v| self.weights.get(v) - delta.dot(g.position(v) - self.origin_position))
                .collect(),
        );
        out
    }

    /// Dual vertex of each face in its canonical frame, in absolute
    /// coordinates: the power centers of the faces under the recovered
    /// weights once the translation is fixed.
    pub fn dual_positions(&self) -> Vec<Vec2> {
        self.gradients
            .iter()
            .map(|g| *g + self.origin_position)
            .collect()
    }
}

/// Integrates the heights of the lifted faces across the dual, starting at
/// the root face's lift containing vertex `origin`, where the plane is
/// `z ≡ 0`. Gradients change by the dual displacement across each edge and
/// constants by whatever keeps the planes continuous along it.
pub fn lift(pair: &ReciprocalPair, origin: usize) -> Result<LiftingResult> {
    let g = &pair.primal;
    let dual = &pair.dual;
    if origin >= g.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "origin {origin} out of range"
        )));
    }
    let o = g.position(origin);
    let d0 = g.rotation(origin)[0];
    let root_face = g.left_face(d0);
    let root_lift = -g.corner_shift(d0);

    let max_shift = g
        .darts()
        .map(|d| g.corner_shift(d).max_abs())
        .max()
        .unwrap_or(0);
    let window = PERIODICITY_REACH + 1 + max_shift + root_lift.max_abs();
    let inside = |n: IVec2| n.max_abs() <= window;

    let shape = *g.shape();
    let mut planes: HashMap<(usize, IVec2), (Vec2, f64)> = HashMap::new();
    planes.insert((root_face, root_lift), (Vec2::ZERO, 0.0));
    let mut queue = VecDeque::from([(root_face, root_lift)]);
    let mut worst: f64 = 0.0;
    while let Some((f, n)) = queue.pop_front() {
        let (grad, c) = planes[&(f, n)];
        for &b in &g.face(f).boundary {
            // cross b from its left face f into its right face
            let next = (g.right_face(b), n + g.neighbor_offset(b));
            if !inside(next.1) {
                continue;
            }
            let step = dual.displacement(b);
            let p = g.corner(b) + shape.translation(n) - o;
            let candidate = (grad - step, c + step.dot(p));
            match planes.get(&next) {
                Some(&(g2, c2)) => {
                    let scale = 1.0 + c2.abs().max(g2.norm() * p.norm());
                    let r = ((g2 - candidate.0).norm() * p.norm()).max((c2 - candidate.1).abs());
                    worst = worst.max(r / scale);
                }
                None => {
                    planes.insert(next, candidate);
                    queue.push_back(next);
                }
            }
        }
    }
    if worst > LIFT_TOLERANCE {
        return Err(Error::PathInconsistent { residual: worst });
    }

    let canonical = |f: usize| {
        planes
            .get(&(f, IVec2::ZERO))
            .copied()
            .expect("window covers every canonical lift")
    };
    let gradients: Vec<Vec2> = (0..g.face_count()).map(|f| canonical(f).0).collect();
    let constants: Vec<f64> = (0..g.face_count()).map(|f| canonical(f).1).collect();
    let mut result = LiftingResult {
        origin,
        root_face,
        root_lift,
        gradients,
        constants,
        weights: VertexWeights::zeros(g.vertex_count()),
        translation: Vec2::ZERO,
        planes,
        origin_position: o,
    };
    let weights = (0..g.vertex_count())
        .map(|v| {
            result
                .lifted_weight(g, v, IVec2::ZERO)
                .expect("window covers every vertex")
        })
        .collect();
    result.weights = VertexWeights::new(weights);
    Ok(result)
}

/// The gradient shift that makes the copies of `o` translated by the two
/// lattice generators `u`, `v` get weight zero, like `o` itself:
/// `(−½(|u|², |v|²) − (C(f₀+u), C(f₀+v)))·M⁻¹` for a lift whose root gradient
/// is zero.
pub fn fix_translation(pair: &ReciprocalPair, lifting: &LiftingResult) -> Result<Vec2> {
    let g = &pair.primal;
    let shape = g.shape();
    let (u, v) = (shape.u(), shape.v());
    let mut rhs = [0.0; 2];
    for (i, (k, t)) in [(IVec2::new(1, 0), u), (IVec2::new(0, 1), v)]
        .into_iter()
        .enumerate()
    {
        let (grad, c) = lifting
            .plane(lifting.root_face, lifting.root_lift + k)
            .ok_or(Error::PathInconsistent {
                residual: f64::INFINITY,
            })?;
        // weight of the copy of o at t must vanish: ½|t|² − (grad + δ)·t − c = 0
        rhs[i] = 0.5 * t.norm_squared() - grad.dot(t) - c;
    }
    Ok(shape.inverse().row_mul(Vec2::new(rhs[0], rhs[1])))
}

/// Lift, fix the translation, and check periodicity of the weights over
/// nearby lattice translates.
pub fn coherent_lifting(pair: &ReciprocalPair) -> Result<LiftingResult> {
    let g = &pair.primal;
    let raw = lift(pair, 0)?;
    let delta = fix_translation(pair, &raw)?;
    let fixed = raw.translated(delta, g);

    let scale = 1.0
        + fixed
            .weights
            .values()
            .iter()
            .fold(0.0f64, |m, w| m.max(w.abs()));
    for v in 0..g.vertex_count() {
        for a in -PERIODICITY_REACH..=PERIODICITY_REACH {
            for b in -PERIODICITY_REACH..=PERIODICITY_REACH {
                let w =
                    fixed
                        .lifted_weight(g, v, IVec2::new(a, b))
                        .ok_or(Error::PathInconsistent {
                            residual: f64::INFINITY,
                        })?;
                let err = (w - fixed.weights.get(v)).abs();
                if err > LIFT_TOLERANCE * scale {
                    return Err(Error::WeightCheckFailed(format!(
                        "weight of {} translated by ({a}, {b}) differs by {err:e}",
                        g.vertex_name(v)
                    )));
                }
            }
        }
    }
    Ok(fixed)
}

/// Delaunay weights of the primal of a reciprocal pair, normalized so the
/// first vertex has weight zero.
pub fn weights_from_reciprocal(pair: &ReciprocalPair) -> Result<VertexWeights> {
    let lifting = coherent_lifting(pair)?;
    let verdict = is_weighted_delaunay(&pair.primal, &lifting.weights)?;
    if !verdict.is_delaunay() {
        let bad = verdict
            .edges
            .iter()
            .find(|e| e.class != super::EdgeClass::Delaunay)
            .map(|e| {
                format!(
                    "edge {} has determinant {:e}",
                    pair.primal.edge_name(e.edge),
                    e.det
                )
            })
            .unwrap_or_else(|| "a face diagonal is not flat".into());
        return Err(Error::WeightCheckFailed(bad));
    }
    Ok(lifting.weights)
}

/// Height of the lifted surface at the tail of `d` in the canonical lift of
/// its left face, i.e. `½|x|² − π`.
#[cfg(test)]
fn corner_height(l: &LiftingResult, g: &TorusGraph, d: crate::graph::Dart) -> f64 {
    let x = g.corner(d) - l.origin_position;
    let f = g.left_face(d);
    l.gradients[f].dot(x) + l.constants[f]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::Stress;
    use crate::fixtures;
    use crate::geometry::TorusShape;
    use crate::reciprocal::build_reciprocal;

    fn k7_voronoi_pair() -> ReciprocalPair {
        let g = fixtures::k7();
        build_reciprocal(&g, &fixtures::k7_class_stress(&g), &TorusShape::square()).unwrap()
    }

    #[test]
    fn root_plane_is_zero() {
        let pair = k7_voronoi_pair();
        let l = lift(&pair, 0).unwrap();
        assert_eq!(l.plane(l.root_face, l.root_lift), Some((Vec2::ZERO, 0.0)));
        assert_eq!(l.weights.get(0), 0.0);
    }

    #[test]
    fn planes_agree_at_shared_corners() {
        let pair = k7_voronoi_pair();
        let g = &pair.primal;
        let l = coherent_lifting(&pair).unwrap();
        // every corner of a face sees the same height ½|x|² − π from its own
        // face as from the face across the next edge
        for d in g.darts() {
            let x = g.corner(d) - g.position(0);
            let expected = 0.5 * x.norm_squared() - l.weights.get(g.tail(d));
            let via_face = corner_height(&l, g, d);
            // corners may sit in translated copies; compare through periodic weights
            let k = g.corner_shift(d);
            let pi = l.lifted_weight(g, g.tail(d), k).unwrap();
            assert!((via_face - (0.5 * x.norm_squared() - pi)).abs() < 1e-12);
            assert!((expected - via_face).abs() < 1e-9);
        }
    }

    #[test]
    fn k7_voronoi_weights_vanish() {
        let pair = k7_voronoi_pair();
        let w = weights_from_reciprocal(&pair).unwrap();
        assert!(w.values().iter().all(|x| x.abs() < 1e-9), "{w:?}");
    }

    #[test]
    fn k7_dual_vertex_is_the_circumcenter() {
        let pair = k7_voronoi_pair();
        let g = &pair.primal;
        let l = coherent_lifting(&pair).unwrap();
        let target = [
            Vec2::ZERO,
            Vec2::new(1.0, 3.0) * (1.0 / 7.0),
            Vec2::new(3.0, 2.0) * (1.0 / 7.0),
        ];
        let face = (0..g.face_count())
            .find(|&f| {
                let corners = g.face_corners(f);
                target
                    .iter()
                    .all(|t| corners.iter().any(|c| (*c - *t).max_abs() < 1e-12))
            })
            .expect("shaded triangle is a face");
        let center = l.dual_positions()[face];
        assert!(
            (center - Vec2::new(19.0 / 98.0, 17.0 / 98.0)).max_abs() < 1e-9,
            "{center}"
        );
    }

    #[test]
    fn fixed_translation_is_idempotent() {
        let pair = k7_voronoi_pair();
        let fixed = coherent_lifting(&pair).unwrap();
        let delta = fix_translation(&pair, &fixed).unwrap();
        assert!(delta.max_abs() < 1e-12, "{delta}");
    }

    #[test]
    fn equilateral_k7_has_zero_weights() {
        let g = fixtures::k7();
        let shape = fixtures::k7_equilateral_shape();
        let w = Stress::uniform(21, 1.0 / 3f64.sqrt());
        let pair = build_reciprocal(&g, &w, &shape).unwrap();
        let pi = weights_from_reciprocal(&pair).unwrap();
        assert!(pi.values().iter().all(|x| x.abs() < 1e-9), "{pi:?}");
    }
}
