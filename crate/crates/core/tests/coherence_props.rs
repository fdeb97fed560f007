mod common;

use proptest::prelude::*;
use rand::Rng;
use torusgraph::coherence::{
    classify, coherent_lifting, is_weighted_delaunay, lifted_det3, lifted_det4, local_delaunay_det,
    weighted_voronoi, weights_from_reciprocal, EdgeClass,
};
use torusgraph::equilibrium::{equilibrium_residual, tutte_embed};
use torusgraph::reciprocal::{build_reciprocal, covariance, normalize_stress, reciprocal_torus};
use torusgraph::{Dart, IVec2, Stress, Vec2};

fn random_point(rng: &mut impl Rng) -> Vec2 {
    Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn both_classes(points: [Vec2; 4], weights: [f64; 4]) -> (EdgeClass, EdgeClass, f64, f64) {
    let [p, q, r, s] = points;
    let (d3, scale) = lifted_det3(
        [q - p, r - p, s - p],
        weights[0],
        [weights[1], weights[2], weights[3]],
    );
    let d4 = lifted_det4(points, weights);
    (classify(d3, scale), classify(d4, scale), d3, d4)
}

#[test]
fn small_and_lifted_determinants_agree() {
    let mut rng = common::rng(2024);
    for _ in 0..1000 {
        let points = [0; 4].map(|_| random_point(&mut rng));
        let weights = [0; 4].map(|_| rng.gen_range(-0.5..0.5));
        let (c3, c4, d3, d4) = both_classes(points, weights);
        assert_eq!(c3, c4, "{d3} vs {d4}");
        assert_ne!(c3, EdgeClass::Flat);
    }
    // power-cocircular: every site has the same power at a common center
    for _ in 0..200 {
        let center = random_point(&mut rng);
        let radius = rng.gen_range(0.5..2.0);
        let points = [0; 4].map(|_| random_point(&mut rng));
        let weights = points.map(|x| 0.5 * (x - center).norm_squared() - 0.5 * radius * radius);
        let (c3, c4, _, _) = both_classes(points, weights);
        assert_eq!(c3, EdgeClass::Flat);
        assert_eq!(c4, EdgeClass::Flat);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn constant_weight_shift_leaves_determinants(seed in any::<u64>(), c in -10.0f64..10.0) {
        let mut rng = common::rng(seed);
        let (set, g) = common::random_triangulation(&mut rng, 5 + (seed % 12) as usize);
        let w = set.weights();
        let shifted = w.shifted(c);
        for e in 0..g.edge_count() {
            let a = local_delaunay_det(&g, &w, e).unwrap();
            let b = local_delaunay_det(&g, &shifted, e).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-3));
        }
    }

    #[test]
    fn oracle_triangulations_round_trip_through_their_duals(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (set, g) = common::random_triangulation(&mut rng, 5 + (seed % 12) as usize);
        let w = set.weights();
        prop_assert!(is_weighted_delaunay(&g, &w).unwrap().is_delaunay());

        let pair = weighted_voronoi(&g, &w).unwrap();
        for e in 0..g.edge_count() {
            let d = Dart::reference(e);
            let (a, b) = (g.displacement(d), pair.dual.displacement(d));
            prop_assert!(a.dot(b).abs() <= 1e-9 * a.norm() * b.norm());
        }
        prop_assert!(equilibrium_residual(&g, &pair.stress).unwrap().is_equilibrium());

        let lifting = coherent_lifting(&pair).unwrap();
        for v in 0..g.vertex_count() {
            let base = lifting.lifted_weight(&g, v, IVec2::ZERO).unwrap();
            for a in -2..=2 {
                for b in -2..=2 {
                    let x = lifting.lifted_weight(&g, v, IVec2::new(a, b)).unwrap();
                    prop_assert!((x - base).abs() <= 1e-9);
                }
            }
        }
        let recovered = weights_from_reciprocal(&pair).unwrap();
        prop_assert!(recovered.max_abs_diff(&w.normalized_at(0)) <= 1e-7);
    }

    #[test]
    fn reciprocal_pairs_are_coherent(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (_, g) = common::random_triangulation(&mut rng, 5 + (seed % 12) as usize);
        let stress = Stress::new((0..g.edge_count()).map(|_| rng.gen_range(0.3..3.0)).collect());
        let g = tutte_embed(&g, &stress, 0).unwrap();
        let stress = normalize_stress(&g, &stress).unwrap();
        let shape = reciprocal_torus(&covariance(&g, &stress).unwrap()).unwrap();
        let pair = build_reciprocal(&g, &stress, &shape).unwrap();
        let w = weights_from_reciprocal(&pair).unwrap();
        prop_assert!(is_weighted_delaunay(&pair.primal, &w).unwrap().is_delaunay());

        // the Voronoi dual of the recovered weights is the same dual
        let again = weighted_voronoi(&pair.primal, &w).unwrap();
        for (a, b) in again.stress.values().iter().zip(stress.values()) {
            prop_assert!((a - b).abs() <= 1e-7 * b.max(1.0));
        }
    }
}

#[test]
fn weights_are_unique_up_to_a_constant() {
    let mut rng = common::rng(77);
    let (set, g) = common::random_triangulation(&mut rng, 9);
    let pair = weighted_voronoi(&g, &set.weights()).unwrap();
    let a = weights_from_reciprocal(&pair).unwrap();
    let b = weighted_voronoi(&g, &set.weights().shifted(3.5)).unwrap();
    let b = weights_from_reciprocal(&b).unwrap();
    assert!(a.max_abs_diff(&b) <= 1e-9);
}
