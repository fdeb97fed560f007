//! Circulations, cocirculations and their homology classes.

use crate::error::{Error, Result};
use crate::geometry::{IVec2, Vec2};
use crate::graph::{dual, Dart, TorusGraph};

/// Vertex-balance tolerance, relative to the largest edge value.
const BALANCE_TOLERANCE: f64 = 1e-9;

/// A real value per edge, read on reference darts; `φ(e⁻) = −φ(e⁺)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circulation {
    values: Vec<f64>,
}

impl Circulation {
    pub fn new(values: Vec<f64>) -> Self {
        Circulation { values }
    }

    pub fn zero(edges: usize) -> Self {
        Circulation {
            values: vec![0.0; edges],
        }
    }

    /// Indicator of a closed walk: `+1` per forward traversal of an edge,
    /// `−1` per backward traversal.
    pub fn from_cycle(g: &TorusGraph, cycle: &[Dart]) -> Self {
        let mut values = vec![0.0; g.edge_count()];
        for d in cycle {
            values[d.edge()] += d.sign();
        }
        Circulation { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, d: Dart) -> f64 {
        d.sign() * self.values[d.edge()]
    }

    /// `aφ + bψ`.
    pub fn combine(&self, a: f64, other: &Circulation, b: f64) -> Circulation {
        Circulation {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }
}

/// A row vector per edge, read on reference darts, whose transpose is a
/// circulation of the dual map.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocirculation {
    values: Vec<f64>,
}

impl Cocirculation {
    pub fn new(values: Vec<f64>) -> Self {
        Cocirculation { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Sum of the homology vectors of a closed walk.
pub fn cycle_homology(g: &TorusGraph, cycle: &[Dart]) -> Result<IVec2> {
    for (i, d) in cycle.iter().enumerate() {
        let next = cycle[(i + 1) % cycle.len()];
        if g.head(*d) != g.tail(next) {
            return Err(Error::NotClosed { position: i });
        }
    }
    Ok(cycle
        .iter()
        .fold(IVec2::ZERO, |acc, d| acc + g.homology(*d)))
}

/// Largest signed outflow over vertices, with the vertex attaining it.
pub fn vertex_imbalance(g: &TorusGraph, phi: &Circulation) -> (usize, f64) {
    let mut worst = (0, 0.0);
    for v in 0..g.vertex_count() {
        let net: f64 = g.rotation(v).iter().map(|d| phi.value(*d)).sum();
        if net.abs() > worst.1 {
            worst = (v, net.abs());
        }
    }
    worst
}

fn check_circulation(g: &TorusGraph, phi: &Circulation) -> Result<()> {
    if phi.values.len() != g.edge_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} edges",
            phi.values.len(),
            g.edge_count()
        )));
    }
    let scale = phi.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let (vertex, residual) = vertex_imbalance(g, phi);
    if residual > BALANCE_TOLERANCE * scale {
        return Err(Error::NotACirculation { vertex, residual });
    }
    Ok(())
}

/// `[φ] = Λφ`.
pub fn circulation_class(g: &TorusGraph, phi: &Circulation) -> Result<Vec2> {
    check_circulation(g, phi)?;
    Ok(lambda_times(g, phi))
}

fn lambda_times(g: &TorusGraph, phi: &Circulation) -> Vec2 {
    g.homology_matrix()
        .iter()
        .zip(&phi.values)
        .fold(Vec2::ZERO, |acc, (h, x)| acc + h.to_vec2() * *x)
}

/// `‖Δφ − Λφ‖∞`, with `Δ` the displacement matrix pulled back to the square
/// reference torus. Zero up to rounding for every circulation.
pub fn verify_harmonic(g: &TorusGraph, phi: &Circulation) -> f64 {
    let inv = g.shape().inverse();
    let delta_phi = g
        .displacement_matrix()
        .iter()
        .zip(&phi.values)
        .fold(Vec2::ZERO, |acc, (d, x)| acc + inv.mul_vec(*d) * *x);
    (delta_phi - lambda_times(g, phi)).max_abs()
}

/// Fundamental cycles of a spanning tree, as circulations. They span the
/// cycle space.
pub fn cycle_basis(g: &TorusGraph) -> Vec<Circulation> {
    g.fundamental_cycles()
        .iter()
        .map(|c| Circulation::from_cycle(g, c))
        .collect()
}

/// The two rows of `Λ` and their cohomology classes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCocirculations {
    pub lambda1: Cocirculation,
    pub lambda2: Cocirculation,
    pub class1: Vec2,
    pub class2: Vec2,
}

/// The rows of `Λ`, checked to be cocirculations with classes `(0, 1)` and
/// `(−1, 0)`.
pub fn boundary_cocirculations(g: &TorusGraph) -> Result<BoundaryCocirculations> {
    let lambda = g.homology_matrix();
    let rows = [
        Cocirculation::new(lambda.iter().map(|h| h.x as f64).collect()),
        Cocirculation::new(lambda.iter().map(|h| h.y as f64).collect()),
    ];
    let dual = dual(g)?.graph;
    let expected = [Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0)];
    let mut classes = [Vec2::ZERO; 2];
    for (i, row) in rows.iter().enumerate() {
        // dual dart i carries the value of primal dart i
        let phi = Circulation::new(row.values.clone());
        let (vertex, residual) = vertex_imbalance(&dual, &phi);
        if residual > BALANCE_TOLERANCE {
            return Err(Error::CocirculationCheckFailed(format!(
                "row {} of the homology matrix is unbalanced at face {vertex} ({residual:e})",
                i + 1
            )));
        }
        classes[i] = lambda_times(&dual, &phi);
        if (classes[i] - expected[i]).max_abs() > BALANCE_TOLERANCE {
            return Err(Error::CocirculationCheckFailed(format!(
                "row {} has class {}, expected {}",
                i + 1,
                classes[i],
                expected[i]
            )));
        }
    }
    let [lambda1, lambda2] = rows;
    Ok(BoundaryCocirculations {
        lambda1,
        lambda2,
        class1: classes[0],
        class2: classes[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn face_boundaries_are_null_homologous() {
        let g = fixtures::k7();
        for f in g.faces() {
            assert_eq!(cycle_homology(&g, &f.boundary).unwrap(), IVec2::ZERO);
        }
    }

    #[test]
    fn g1_loop_classes() {
        let g = fixtures::g1();
        let b = Dart::reference(g.edge_index("b").unwrap());
        let a = Dart::reference(g.edge_index("a").unwrap());
        assert_eq!(cycle_homology(&g, &[b]).unwrap(), IVec2::new(1, 1));
        assert_eq!(
            cycle_homology(&g, &[a, b.rev()]).unwrap(),
            IVec2::new(0, -1)
        );
    }

    #[test]
    fn open_walk_is_rejected() {
        let g = fixtures::k7();
        let d = g.rotation(0)[0];
        assert_eq!(
            cycle_homology(&g, &[d]),
            Err(Error::NotClosed { position: 0 })
        );
    }

    #[test]
    fn zero_circulation() {
        let g = fixtures::k7();
        let phi = Circulation::zero(g.edge_count());
        assert_eq!(circulation_class(&g, &phi).unwrap(), Vec2::ZERO);
        assert_eq!(verify_harmonic(&g, &phi), 0.0);
    }

    #[test]
    fn cycle_indicator_class_matches_cycle_homology() {
        let g = fixtures::k7();
        for cycle in g.fundamental_cycles() {
            let phi = Circulation::from_cycle(&g, &cycle);
            let class = circulation_class(&g, &phi).unwrap();
            assert_eq!(class, cycle_homology(&g, &cycle).unwrap().to_vec2());
        }
    }

    #[test]
    fn unbalanced_values_rejected() {
        let g = fixtures::k7();
        let mut values = vec![0.0; g.edge_count()];
        values[0] = 1.0;
        assert!(matches!(
            circulation_class(&g, &Circulation::new(values)),
            Err(Error::NotACirculation { .. })
        ));
    }

    #[test]
    fn g1_single_loops_are_harmonic() {
        let g = fixtures::g1();
        for e in 0..3 {
            let d = Dart::reference(e);
            let phi = Circulation::from_cycle(&g, &[d]);
            assert_eq!(verify_harmonic(&g, &phi), 0.0);
            assert_eq!(g.displacement(d), g.homology(d).to_vec2());
        }
    }

    #[test]
    fn boundary_classes_on_fixtures() {
        for g in [fixtures::k7(), fixtures::g1(), fixtures::gk(2)] {
            let b = boundary_cocirculations(&g).unwrap();
            assert_eq!(b.class1, Vec2::new(0.0, 1.0));
            assert_eq!(b.class2, Vec2::new(-1.0, 0.0));
        }
    }
}
