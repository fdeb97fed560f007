//! Weighted Delaunay structure on the torus: local predicates, lifting of a
//! reciprocal pair to vertex weights, and a brute-force construction from
//! weighted sites.

mod lifting;
mod oracle;
mod predicates;

pub use lifting::{
    coherent_lifting, fix_translation, lift, weights_from_reciprocal, LiftingResult, LIFT_TOLERANCE,
};
pub use oracle::{
    oracle_weighted_delaunay, power_center, weighted_voronoi, Site, SiteSet, MAX_SITES,
};
pub use predicates::{
    classify, det3, det4, is_weighted_delaunay, lifted_det3, lifted_det4, local_delaunay_det,
    local_delaunay_det_at, DelaunayVerdict, DiagonalVerdict, EdgeClass, EdgeVerdict,
    FLAT_TOLERANCE,
};

use crate::equilibrium::{tutte_embed, Stress};
use crate::error::Result;
use crate::graph::TorusGraph;
use crate::reciprocal::{
    build_reciprocal, covariance, normalize_stress, reciprocal_torus, ReciprocalPair,
};

/// One weight per vertex, the `π` in power distance `½|x − p|² − π`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeights {
    values: Vec<f64>,
}

impl VertexWeights {
    pub fn new(values: Vec<f64>) -> Self {
        VertexWeights { values }
    }

    pub fn zeros(n: usize) -> Self {
        VertexWeights {
            values: vec![0.0; n],
        }
    }

    pub fn get(&self, v: usize) -> f64 {
        self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Adds `c` to every weight; power diagrams do not change.
    pub fn shifted(&self, c: f64) -> VertexWeights {
        VertexWeights {
            values: self.values.iter().map(|w| w + c).collect(),
        }
    }

    /// Shifted so that vertex `v` has weight zero.
    pub fn normalized_at(&self, v: usize) -> VertexWeights {
        self.shifted(-self.values[v])
    }

    pub fn max_abs_diff(&self, other: &VertexWeights) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Output of [`coherent_embedding`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentEmbedding {
    pub pair: ReciprocalPair,
    pub weights: VertexWeights,
}

/// Turns a positive stress into a weighted Delaunay embedding: equilibrium
/// embedding, normalization, reciprocal torus, dual and lifted weights.
pub fn coherent_embedding(
    g: &TorusGraph,
    stress: &Stress,
    pinned: usize,
) -> Result<CoherentEmbedding> {
    let embedded = tutte_embed(g, stress, pinned)?;
    let normalized = normalize_stress(&embedded, stress)?;
    let shape = reciprocal_torus(&covariance(&embedded, &normalized)?)?;
    let pair = build_reciprocal(&embedded, &normalized, &shape)?;
    let weights = weights_from_reciprocal(&pair)?;
    Ok(CoherentEmbedding { pair, weights })
}
