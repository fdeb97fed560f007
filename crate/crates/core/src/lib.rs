//! Geodesic graphs on flat tori: combinatorial maps with homology, stressed
//! equilibrium embeddings, reciprocal diagrams and weighted Delaunay weights.
//!
//! ```
//! use torusgraph::{fixtures, reciprocal::covariance, Stress};
//!
//! let g = fixtures::k7();
//! let a = covariance(&g, &Stress::uniform(g.edge_count(), 1.0)).unwrap();
//! assert!((a.discriminant - 3.0).abs() < 1e-9);
//! ```

pub mod coherence;
pub mod equilibrium;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod graph;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod reciprocal;
pub mod render;

pub use coherence::{SiteSet, VertexWeights};
pub use equilibrium::Stress;
pub use error::{Error, Result};
pub use geometry::{IVec2, Mat2, TorusShape, Vec2};
pub use graph::{Dart, TorusGraph};
pub use reciprocal::ReciprocalPair;
