mod common;

use proptest::prelude::*;
use rand::Rng;
use torusgraph::equilibrium::{equilibrium_residual, tutte_embed};
use torusgraph::homology::{vertex_imbalance, Circulation};
use torusgraph::reciprocal::{
    build_reciprocal, covariance, force_diagram, is_reciprocal_on, normalize_stress,
    reciprocal_torus,
};
use torusgraph::{fixtures, Dart, Mat2, ReciprocalPair, Stress, TorusGraph, TorusShape};

fn random_stress(g: &TorusGraph, rng: &mut impl Rng) -> Stress {
    Stress::new(
        (0..g.edge_count())
            .map(|_| rng.gen_range(0.3..3.0))
            .collect(),
    )
}

/// Tutte embedding of a random triangulation under a random stress, then
/// its canonical reciprocal pair.
fn random_pair(seed: u64) -> ReciprocalPair {
    let mut rng = common::rng(seed);
    let (_, g) = common::random_triangulation(&mut rng, 5 + (seed % 12) as usize);
    let stress = random_stress(&g, &mut rng);
    let g = tutte_embed(&g, &stress, 0).unwrap();
    let stress = normalize_stress(&g, &stress).unwrap();
    let shape = reciprocal_torus(&covariance(&g, &stress).unwrap()).unwrap();
    build_reciprocal(&g, &stress, &shape).unwrap()
}

fn max_diff(a: &Stress, b: &Stress) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn reciprocal_pairs_are_balanced_both_ways(seed in any::<u64>()) {
        let pair = random_pair(seed);
        prop_assert!(max_diff(&pair.measured_stress(), &pair.stress) <= 1e-9);
        prop_assert!(equilibrium_residual(&pair.primal, &pair.measured_stress()).unwrap().is_equilibrium());
        let inverse = Stress::new(pair.stress.values().iter().map(|w| 1.0 / w).collect());
        prop_assert!(equilibrium_residual(&pair.dual, &inverse).unwrap().is_equilibrium());

        // each coordinate of the dual displacements is a primal circulation
        for axis in 0..2 {
            let phi = Circulation::new(
                (0..pair.primal.edge_count())
                    .map(|e| {
                        let d = pair.dual.displacement(Dart::reference(e));
                        if axis == 0 { d.x } else { d.y }
                    })
                    .collect(),
            );
            let (_, residual) = vertex_imbalance(&pair.primal, &phi);
            prop_assert!(residual <= 1e-9);
        }
    }

    #[test]
    fn covariance_discriminant_is_positive(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        for g in [fixtures::k7(), fixtures::g1(), fixtures::gk(2)] {
            let stress = random_stress(&g, &mut rng);
            prop_assert!(covariance(&g, &stress).unwrap().discriminant > 0.0);
        }
    }

    #[test]
    fn reciprocity_is_rotation_and_scale_free(
        seed in any::<u64>(),
        angle in 0.0f64..std::f64::consts::TAU,
        sigma in 0.1f64..10.0,
    ) {
        let pair = random_pair(seed);
        let canonical = *pair.shape();
        prop_assert!(is_reciprocal_on(&pair.primal, &pair.stress, &canonical));
        let (s, c) = angle.sin_cos();
        let r = Mat2::new(c, -s, s, c).scale(sigma);
        let turned = TorusShape::new(r * canonical.matrix()).unwrap();
        prop_assert!(is_reciprocal_on(&pair.primal, &pair.stress, &turned));
        let sheared = TorusShape::new(Mat2::new(1.0, 0.3, 0.0, 1.0) * canonical.matrix()).unwrap();
        prop_assert!(!is_reciprocal_on(&pair.primal, &pair.stress, &sheared));
    }

    #[test]
    fn force_diagrams_are_orthogonal(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (_, g) = common::random_triangulation(&mut rng, 5 + (seed % 12) as usize);
        let stress = random_stress(&g, &mut rng);
        let g = tutte_embed(&g, &stress, 0).unwrap();
        let force = force_diagram(&g, &stress).unwrap();
        for e in 0..g.edge_count() {
            let d = Dart::reference(e);
            let (a, b) = (g.displacement(d), force.dual.displacement(d));
            prop_assert!(a.dot(b).abs() <= 1e-9 * a.norm() * b.norm());
            prop_assert!((b.norm() / a.norm() - stress.get(e)).abs() <= 1e-9 * stress.get(e).max(1.0));
        }
    }
}
