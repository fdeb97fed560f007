//! Covariance of a stress, reciprocal tori, reciprocal duals and force
//! diagrams.

use std::collections::VecDeque;

use crate::equilibrium::{affine_transfer, equilibrium_residual, Stress};
use crate::error::{Error, Result};
use crate::geometry::{perp, IVec2, Mat2, TorusShape, Vec2};
use crate::graph::{dual_with_positions, Dart, TorusGraph};

/// Tolerance for the covariance identities and the normalization test.
pub const RECIPROCAL_TOLERANCE: f64 = 1e-9;

/// Entries of the covariance matrix `ΔΩΔᵀ = ((α, γ), (γ, β))`, with `Δ` the
/// displacement matrix pulled back to the square reference torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressAnalysis {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub discriminant: f64,
}

impl StressAnalysis {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.alpha, self.gamma, self.gamma, self.beta)
    }
}

pub fn covariance(g: &TorusGraph, stress: &Stress) -> Result<StressAnalysis> {
    stress.check_len(g)?;
    let inv = g.shape().inverse();
    let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
    for (e, d) in g.displacement_matrix().into_iter().enumerate() {
        let r = inv.mul_vec(d);
        let w = stress.get(e);
        alpha += w * r.x * r.x;
        beta += w * r.y * r.y;
        gamma += w * r.x * r.y;
    }
    Ok(StressAnalysis {
        alpha,
        beta,
        gamma,
        discriminant: alpha * beta - gamma * gamma,
    })
}

/// `ω / √(αβ − γ²)`.
pub fn normalize_stress(g: &TorusGraph, stress: &Stress) -> Result<Stress> {
    stress.check_positive(g)?;
    let a = covariance(g, stress)?;
    if !(a.discriminant > 0.0) {
        return Err(Error::InvalidStress(format!(
            "covariance discriminant {} is not positive",
            a.discriminant
        )));
    }
    Ok(stress.scaled(1.0 / a.discriminant.sqrt()))
}

/// The torus `((β, −γ), (0, 1))` on which a normalized stress is reciprocal.
/// Every other such torus is a rotated, scaled copy.
pub fn reciprocal_torus(analysis: &StressAnalysis) -> Result<TorusShape> {
    if (analysis.discriminant - 1.0).abs() > RECIPROCAL_TOLERANCE {
        return Err(Error::NotNormalized {
            discriminant: analysis.discriminant,
        });
    }
    TorusShape::new(Mat2::new(analysis.beta, -analysis.gamma, 0.0, 1.0))
}

/// The covariance that makes a stress reciprocal on `shape`:
/// `det M · (MᵀM)⁻¹`.
pub fn reciprocal_covariance(shape: &TorusShape) -> StressAnalysis {
    let m = shape.matrix();
    let det = m.det();
    let alpha = (m.b * m.b + m.d * m.d) / det;
    let beta = (m.a * m.a + m.c * m.c) / det;
    // + 0.0 turns −0 into 0
    let gamma = -(m.a * m.b + m.c * m.d) / det + 0.0;
    StressAnalysis {
        alpha,
        beta,
        gamma,
        discriminant: alpha * beta - gamma * gamma,
    }
}

/// Whether `stress` is reciprocal for the image of `g` on `shape`, tested on
/// the covariance.
pub fn is_reciprocal_on(g: &TorusGraph, stress: &Stress, shape: &TorusShape) -> bool {
    let Ok(a) = covariance(g, stress) else {
        return false;
    };
    let target = reciprocal_covariance(shape);
    let close = |x: f64, t: f64| (x - t).abs() <= RECIPROCAL_TOLERANCE * t.abs().max(1.0);
    close(a.alpha, target.alpha) && close(a.beta, target.beta) && close(a.gamma, target.gamma)
}

/// A primal embedding and a reciprocal dual on the same torus. Dual dart `i`
/// crosses primal dart `i` from its right face to its left face.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalPair {
    pub primal: TorusGraph,
    pub dual: TorusGraph,
    pub stress: Stress,
}

impl ReciprocalPair {
    /// `|e*| / |e|` per edge.
    pub fn measured_stress(&self) -> Stress {
        measured_stress(&self.primal, &self.dual)
    }

    pub fn shape(&self) -> &TorusShape {
        self.primal.shape()
    }
}

/// `|e*| / |e|` per edge, for duals whose dart `i` crosses primal dart `i`.
pub fn measured_stress(primal: &TorusGraph, dual: &TorusGraph) -> Stress {
    Stress::new(
        (0..primal.edge_count())
            .map(|e| {
                let d = Dart::reference(e);
                dual.displacement(d).norm() / primal.displacement(d).norm()
            })
            .collect(),
    )
}

/// Builds the reciprocal dual of the image of `g` on `shape`: dual dart
/// displacements are `ω_e·Δ_e⊥`, integrated over the faces from face 0,
/// whose dual vertex sits at the centroid of its lift.
pub fn build_reciprocal(
    g: &TorusGraph,
    stress: &Stress,
    shape: &TorusShape,
) -> Result<ReciprocalPair> {
    stress.check_positive(g)?;
    if !equilibrium_residual(g, stress)?.is_equilibrium() {
        return Err(Error::NotReciprocalHere(
            "stress is not in equilibrium".into(),
        ));
    }
    if !is_reciprocal_on(g, stress, shape) {
        let a = covariance(g, stress)?;
        let t = reciprocal_covariance(shape);
        return Err(Error::NotReciprocalHere(format!(
            "covariance (α, β, γ) = ({}, {}, {}), need ({}, {}, {})",
            a.alpha, a.beta, a.gamma, t.alpha, t.beta, t.gamma
        )));
    }
    let primal = affine_transfer(g, shape)?;
    let root = face_centroid(&primal, 0);
    let dual = integrate_dual(&primal, stress, shape, root)?;
    check_orthogonal(&primal, &dual, stress)?;
    Ok(ReciprocalPair {
        primal,
        dual,
        stress: stress.clone(),
    })
}

pub(crate) fn face_centroid(g: &TorusGraph, f: usize) -> Vec2 {
    let corners = g.face_corners(f);
    corners.iter().fold(Vec2::ZERO, |acc, c| acc + *c) * (1.0 / corners.len() as f64)
}

/// Integrates `Δ*_d = ω·Δ_d⊥` (native on `g`'s torus) over a breadth-first
/// spanning tree of the faces and realizes the result on the lattice of
/// `dual_shape`, with face 0's dual vertex at `root`.
///
/// Face `f` at lift index `n` is the canonical lift of `f` translated by the
/// lattice vector `n`. Crossing `d` from its right face at `n` reaches its
/// left face at `n − neighbor_offset(d)`; dual positions are stored in each
/// face's canonical frame of `dual_shape`.
pub(crate) fn integrate_dual(
    g: &TorusGraph,
    stress: &Stress,
    dual_shape: &TorusShape,
    root: Vec2,
) -> Result<TorusGraph> {
    let target: Vec<Vec2> = g
        .darts()
        .map(|d| perp(g.displacement(d)) * stress.get(d.edge()))
        .collect();
    let f = g.face_count();
    let mut placed: Vec<Option<(Vec2, IVec2)>> = vec![None; f];
    placed[0] = Some((root, IVec2::ZERO));
    let mut queue = VecDeque::from([0usize]);
    while let Some(r) = queue.pop_front() {
        let (q_r, n_r) = placed[r].expect("queued faces are placed");
        // darts whose right face is r are the reversals of r's boundary
        for b in g.face(r).boundary.clone() {
            let d = b.rev();
            let l = g.left_face(d);
            if placed[l].is_some() {
                continue;
            }
            let n_l = n_r - g.neighbor_offset(d);
            placed[l] = Some((q_r + target[d.index()], n_l));
            queue.push_back(l);
        }
    }
    let positions: Vec<Vec2> = placed
        .iter()
        .map(|p| {
            let (q, n) = p.expect("face graph of a cellular map is connected");
            q - dual_shape.translation(n)
        })
        .collect();
    let dual = dual_with_positions(g, *dual_shape, &positions)?;

    let scale = target
        .iter()
        .fold(0.0f64, |m, t| m.max(t.norm()))
        .max(f64::MIN_POSITIVE);
    let residual = g
        .darts()
        .map(|d| (dual.displacement(d) - target[d.index()]).norm())
        .fold(0.0f64, f64::max);
    if residual > RECIPROCAL_TOLERANCE * scale.max(1.0) {
        return Err(Error::ClosureFailure { residual });
    }
    Ok(dual)
}

fn check_orthogonal(primal: &TorusGraph, dual: &TorusGraph, stress: &Stress) -> Result<()> {
    for e in 0..primal.edge_count() {
        let d = Dart::reference(e);
        let (a, b) = (primal.displacement(d), dual.displacement(d));
        if a.dot(b).abs() > RECIPROCAL_TOLERANCE * a.norm() * b.norm() {
            return Err(Error::ClosureFailure {
                residual: a.dot(b).abs(),
            });
        }
        let ratio = b.norm() / a.norm();
        if (ratio - stress.get(e)).abs() > RECIPROCAL_TOLERANCE * stress.get(e).max(1.0) {
            return Err(Error::ClosureFailure {
                residual: (ratio - stress.get(e)).abs(),
            });
        }
    }
    Ok(())
}

/// The dual of a stressed graph realized on the torus `N = J·M·ΔΩΔᵀ·Jᵀ`
/// determined by the stress.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceDiagram {
    pub shape: TorusShape,
    pub dual: TorusGraph,
}

/// `J·M·ΔΩΔᵀ·Jᵀ`, with `M` the shape of `g` and `ΔΩΔᵀ` its reference
/// covariance.
pub fn force_diagram_torus(g: &TorusGraph, stress: &Stress) -> Result<TorusShape> {
    let c = covariance(g, stress)?.matrix();
    TorusShape::new(Mat2::J * g.shape().matrix() * c * Mat2::J.transpose())
}

pub fn force_diagram(g: &TorusGraph, stress: &Stress) -> Result<ForceDiagram> {
    stress.check_positive(g)?;
    let report = equilibrium_residual(g, stress)?;
    if !report.is_equilibrium() {
        return Err(Error::InvalidStress(format!(
            "not an equilibrium stress (residual {:e})",
            report.max_residual
        )));
    }
    let shape = force_diagram_torus(g, stress)?;
    let root = face_centroid(g, 0);
    let dual = integrate_dual(g, stress, &shape, root)?;
    Ok(ForceDiagram { shape, dual })
}
