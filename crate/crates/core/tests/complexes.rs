use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbsys::cohomology::{delta, partial_expanded, ComplexTag, Complexes};
use rbsys::samples::random_instance;
use rbsys::Field;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(5))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn consecutive_slices_compose_to_zero(field in fields(), seed in any::<u64>()) {
        let module = random_instance(field, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let cx = Complexes::new(&module).unwrap();
        for tag in [ComplexTag::Alg, ComplexTag::Rbso, ComplexTag::Rbs] {
            let s = cx.slices(tag, 3).unwrap();
            for n in 0..3 {
                prop_assert!(s[n + 1].mul(&s[n]).is_zero(), "{tag} degree {n}");
            }
        }
    }

    #[test]
    fn phi_is_a_chain_map(field in fields(), seed in any::<u64>()) {
        let module = random_instance(field, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let cx = Complexes::new(&module).unwrap();
        for n in 0..3 {
            let lhs = cx.partial(n).unwrap().matrix.mul(&cx.phi(n).unwrap());
            let rhs = cx.phi(n + 1).unwrap().mul(&cx.delta(n).unwrap().matrix);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn partial_matches_expanded_formula(field in fields(), seed in any::<u64>()) {
        let module = random_instance(field, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let cx = Complexes::new(&module).unwrap();
        for n in 0..3 {
            prop_assert_eq!(cx.partial(n).unwrap().matrix, partial_expanded(n, &module));
        }
    }

    #[test]
    fn rbso_cohomology_is_hochschild_of_the_star_algebra(field in fields(), seed in any::<u64>()) {
        let module = random_instance(field, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let cx = Complexes::new(&module).unwrap();
        let dm = cx.d_module();
        let ranks: Vec<usize> = (0..3)
            .map(|n| delta(n, &dm.star, &dm.actions, usize::MAX).unwrap().matrix.rank())
            .collect();
        let report = cx.betti(ComplexTag::Rbso, 2).unwrap();
        for s in &report.degrees {
            prop_assert_eq!(s.rank, ranks[s.degree]);
        }
    }

    #[test]
    fn betti_numbers_obey_rank_nullity(field in fields(), seed in any::<u64>()) {
        let module = random_instance(field, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let cx = Complexes::new(&module).unwrap();
        for tag in [ComplexTag::Alg, ComplexTag::Rbso, ComplexTag::Rbs] {
            for s in cx.betti(tag, 2).unwrap().degrees {
                prop_assert_eq!(s.cochains, s.rank + s.kernel);
                prop_assert_eq!(s.cohomology + s.image, s.kernel);
                prop_assert_eq!(cx.cohomology_basis(tag, s.degree).unwrap().dim(), s.cohomology);
            }
        }
        for n in 1..=2 {
            prop_assert_eq!(cx.dim(ComplexTag::Rbs, n), cx.dim(ComplexTag::Alg, n) + cx.dim(ComplexTag::Rbso, n - 1));
        }
    }

    #[test]
    fn long_exact_sequence_is_exact(field in fields(), seed in any::<u64>()) {
        let module = random_instance(field, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let cx = Complexes::new(&module).unwrap();
        let report = cx.les_check(2).unwrap();
        prop_assert!(report.exact(), "{:?}", report.first_failure());
    }

    #[test]
    fn coboundaries_have_preimages(field in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_instance(field, 2, &mut rng);
        let cx = Complexes::new(&module).unwrap();
        for tag in [ComplexTag::Alg, ComplexTag::Rbso, ComplexTag::Rbs] {
            let n = cx.dim(tag, 1);
            let x = rbsys::samples::random_matrix(field, n, 1, &mut rng);
            let c = cx.cochain(tag, 1, x.column(0)).unwrap();
            let image = cx.apply(&c).unwrap();
            let pre = cx.coboundary_preimage(&image).unwrap().unwrap();
            prop_assert_eq!(cx.apply(&pre).unwrap(), image);
        }
    }
}
