use num_traits::Zero;
use orbitlie::automorphism::DiagramAutomorphism;
use orbitlie::cartan::CartanDatum;
use orbitlie::fold::FoldedDatum;
use orbitlie::weyl::{folded_reflect, random_symmetric_weights, theta_check};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn folded(rows: &[&[i64]], omega: &[usize]) -> FoldedDatum {
    let cd = CartanDatum::from_ints(rows).unwrap();
    let da = DiagramAutomorphism::validate_one_based(&cd, omega).unwrap();
    FoldedDatum::new(&cd, &da).unwrap()
}

fn cases() -> Vec<FoldedDatum> {
    vec![
        folded(&[&[2, -1], &[-1, 2]], &[2, 1]),
        folded(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]], &[3, 2, 1]),
        folded(
            &[
                &[2, -1, 0, 0],
                &[-1, 2, -1, -1],
                &[0, -1, 2, 0],
                &[0, -1, 0, 2],
            ],
            &[3, 2, 4, 1],
        ),
        folded(&[&[0, 0, -1], &[0, 0, -1], &[-1, -1, 2]], &[2, 1, 3]),
        folded(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]], &[1, 2, 3]),
    ]
}

proptest! {
    #[test]
    fn exponent_transport_round_trips(case in 0usize..5, m in prop::collection::vec(0i64..5, 4)) {
        let fd = &cases()[case];
        let m = &m[..fd.breve_indices().len()];
        let k = fd.pullback_exponents(m);
        prop_assert_eq!(fd.transport_exponents(&k).unwrap(), m.to_vec());
        prop_assert_eq!(fd.pullback_height(m), k.iter().sum::<i64>());
    }

    #[test]
    fn transport_is_an_isometry(
        case in 0usize..4,
        m in prop::collection::vec(-4i64..5, 4),
        n in prop::collection::vec(-4i64..5, 4),
    ) {
        let fd = &cases()[case];
        let b = fd.breve_indices().len();
        let (m, n) = (&m[..b], &n[..b]);
        let orbit = fd.orbit_algebra().unwrap();
        let lhs = fd.cartan().form(&fd.pullback_exponents(m), &fd.pullback_exponents(n));
        prop_assert_eq!(lhs, orbit.form(m, n));
    }

    #[test]
    fn weight_transport_round_trips(case in 0usize..5, seed in any::<u64>()) {
        let fd = &cases()[case];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for w in random_symmetric_weights(fd, 5, &mut rng) {
            let t = fd.transport(&w).unwrap();
            prop_assert_eq!(fd.transport_back(&t), w);
        }
    }

    #[test]
    fn folded_reflections_are_equivariant_involutions(case in 0usize..5, seed in any::<u64>()) {
        let fd = &cases()[case];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = random_symmetric_weights(fd, 5, &mut rng);
        for i in fd.breve_real() {
            for w in &weights {
                let once = folded_reflect(fd, i, w).unwrap();
                prop_assert!(once.is_symmetric(fd.automorphism()));
                prop_assert_eq!(&folded_reflect(fd, i, &once).unwrap(), w);
            }
            prop_assert!(theta_check(fd, &[i], &weights).unwrap());
        }
    }

    #[test]
    fn rho_transports_exactly_on_admissible_orbits(case in 0usize..5) {
        let fd = &cases()[case];
        for (i, d) in fd.rho_transport_defects() {
            prop_assert_eq!(fd.breve_indices().contains(&i), d.is_zero());
        }
    }
}
