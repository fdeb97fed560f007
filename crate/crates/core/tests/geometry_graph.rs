mod common;

use proptest::prelude::*;
use torusgraph::geometry::{perp, reduce_to_fundamental};
use torusgraph::graph::PatchRange;
use torusgraph::linalg::{
    residual_norm, solve_dense, DenseMatrix, LinearSystem, RESIDUAL_TOLERANCE,
};
use torusgraph::{fixtures, Dart, IVec2, Mat2, TorusShape, Vec2};

fn shape_strategy() -> impl Strategy<Value = TorusShape> {
    (0.2f64..5.0, -3.0f64..3.0, -3.0f64..3.0, 0.2f64..5.0).prop_filter_map(
        "near-singular",
        |(a, b, c, d)| {
            let m = Mat2::new(a, b, c, d);
            (m.det() > 0.1).then(|| TorusShape::new(m).unwrap())
        },
    )
}

proptest! {
    #[test]
    fn perp_twice_negates(x in -1e6f64..1e6, y in -1e6f64..1e6) {
        let v = Vec2::new(x, y);
        prop_assert_eq!(perp(perp(v)), -v);
    }

    #[test]
    fn reduction_lands_in_the_domain(
        shape in shape_strategy(),
        x in -50.0f64..50.0,
        y in -50.0f64..50.0,
    ) {
        let p = Vec2::new(x, y);
        let (q, k) = reduce_to_fundamental(p, &shape);
        let t = shape.lattice_coords(q);
        prop_assert!((0.0..1.0).contains(&t.x) && (0.0..1.0).contains(&t.y), "{t}");
        // p − q is the lattice vector k
        let back = q + shape.translation(k);
        prop_assert!((back - p).max_abs() <= 1e-9 * (1.0 + p.max_abs()));
    }

    #[test]
    fn dense_solve_meets_its_residual_bound(seed in any::<u64>(), n in 1usize..9) {
        use rand::Rng;
        let mut rng = common::rng(seed);
        // diagonally dominant, so always accepted
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { n as f64 + 1.0 } else { rng.gen_range(-1.0..1.0) })
                    .collect()
            })
            .collect();
        let rhs: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen_range(-10.0..10.0)]).collect();
        let sys = LinearSystem {
            matrix: DenseMatrix::from_rows(&rows).unwrap(),
            rhs: DenseMatrix::from_rows(&rhs).unwrap(),
        };
        let x = solve_dense(&sys).unwrap();
        let b = sys.rhs.max_abs();
        prop_assert!(residual_norm(&sys, &x).unwrap() <= RESIDUAL_TOLERANCE * (1.0 + b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_triangulations_are_consistent_maps(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = 5 + (seed % 12) as usize;
        let (_, g) = common::random_triangulation(&mut rng, n);
        prop_assert_eq!(g.vertex_count() + g.face_count(), g.edge_count());
        for e in 0..g.edge_count() {
            let d = Dart::reference(e);
            prop_assert_eq!(g.displacement(d.rev()), -g.displacement(d));
        }
        for f in g.faces() {
            let sum = f.boundary.iter().fold(Vec2::ZERO, |s, d| s + g.displacement(*d));
            let h = f.boundary.iter().fold(IVec2::ZERO, |s, d| s + g.homology(*d));
            prop_assert!(sum.max_abs() < 1e-12);
            prop_assert_eq!(h, IVec2::ZERO);
        }
        common::assert_double_dual(&g);
    }
}

#[test]
fn fixtures_satisfy_map_invariants() {
    for g in [
        fixtures::k7(),
        fixtures::g1(),
        fixtures::gk(2),
        fixtures::gk(4),
        fixtures::parallel_loops(),
    ] {
        assert_eq!(g.vertex_count() + g.face_count(), g.edge_count());
        for f in g.faces() {
            let sum = f
                .boundary
                .iter()
                .fold(Vec2::ZERO, |s, d| s + g.displacement(*d));
            assert!(sum.max_abs() < 1e-12);
        }
        common::assert_double_dual(&g);
    }
}

#[test]
fn patch_positions_are_exact_translates() {
    let g = fixtures::k7();
    let patch = g.universal_cover_patch(PatchRange::centered(2));
    assert_eq!(patch.vertices.len(), 7 * 25);
    for pv in &patch.vertices {
        assert_eq!(
            pv.position,
            g.position(pv.source) + g.shape().translation(pv.translation)
        );
    }
}

/// Independent simplicity check on a 5×5 patch of G1: no two lifted edges
/// share both endpoints and no lifted edge is a loop.
#[test]
fn g1_patch_is_simple() {
    let g = fixtures::g1();
    let patch = g.universal_cover_patch(PatchRange::centered(2));
    assert_eq!(patch.vertices.len(), 25);
    let mut seen = std::collections::HashSet::new();
    for pe in &patch.edges {
        assert_ne!(pe.from, pe.to);
        assert!(seen.insert((pe.from.min(pe.to), pe.from.max(pe.to))));
    }
    assert!(g.check_essential().essentially_simple);
}
