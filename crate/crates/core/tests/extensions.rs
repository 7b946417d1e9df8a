use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbsys::cohomology::Complexes;
use rbsys::extension::{
    any_section, build_extension, build_extension_unchecked, check_extension, extract_cocycle, gauge_coboundary,
    induced_bimodule, iso_from_cohomologous, normalize, same_class_check, ExtensionData,
};
use rbsys::samples::{random_cocycle, random_instance, random_invertible, random_matrix, random_non_cocycle};
use rbsys::Field;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(5))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn extract_inverts_build(field in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_instance(field, 2, &mut rng);
        let cx = Complexes::new(&module).unwrap();
        let c = random_cocycle(&cx, &mut rng);
        let ext = build_extension(&module, &c).unwrap();
        prop_assert!(check_extension(&ext).unwrap().is_pass());
        let t = ext.section.clone().unwrap();
        prop_assert_eq!(&induced_bimodule(&ext, &t).unwrap(), &module);
        prop_assert_eq!(extract_cocycle(&ext, &t).unwrap(), c);
    }

    #[test]
    fn twisted_sum_is_a_system_iff_cocycle(field in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_instance(field, 2, &mut rng);
        let cx = Complexes::new(&module).unwrap();
        if let Some(c) = random_non_cocycle(&cx, &mut rng) {
            let ext = build_extension_unchecked(&module, &c).unwrap();
            let passes = ext.hat.check_rbs().map(|v| v.is_pass()).unwrap_or(false);
            prop_assert!(!passes);
            prop_assert!(build_extension(&module, &c).is_err());
        }
        let c = random_cocycle(&cx, &mut rng);
        let ext = build_extension_unchecked(&module, &c).unwrap();
        prop_assert!(ext.hat.check_rbs().unwrap().is_pass());
    }

    #[test]
    fn sections_change_the_cocycle_by_a_coboundary(field in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_instance(field, 2, &mut rng);
        let cx = Complexes::new(&module).unwrap();
        let ext = build_extension(&module, &random_cocycle(&cx, &mut rng)).unwrap();
        let t1 = ext.section.clone().unwrap();
        let gamma = random_matrix(field, module.dim(), module.algebra_dim(), &mut rng);
        let t2 = t1.add(&ext.incl.mul(&gamma));
        prop_assert_eq!(&induced_bimodule(&ext, &t2).unwrap(), &module);
        let diff = extract_cocycle(&ext, &t2).unwrap().sub(&extract_cocycle(&ext, &t1).unwrap());
        prop_assert_eq!(diff, gauge_coboundary(&cx, &gamma).unwrap());
    }

    #[test]
    fn cohomologous_cocycles_give_isomorphic_extensions(field in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_instance(field, 2, &mut rng);
        let cx = Complexes::new(&module).unwrap();
        let c1 = random_cocycle(&cx, &mut rng);
        let gamma = random_matrix(field, module.dim(), module.algebra_dim(), &mut rng);
        let c2 = c1.add(&gauge_coboundary(&cx, &gamma).unwrap());
        let iso = iso_from_cohomologous(&module, &c1, &c2, &gamma).unwrap();
        let e1 = build_extension(&module, &c1).unwrap();
        let e2 = build_extension(&module, &c2).unwrap();
        prop_assert_eq!(&e2.proj.mul(&iso.zeta), &e1.proj);
        prop_assert_eq!(&iso.zeta.mul(&e1.incl), &e2.incl);
        prop_assert!(same_class_check(&e1, &e2, &iso).unwrap().is_pass());
    }

    #[test]
    fn presented_extensions_normalize_to_the_split_form(field in fields(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_instance(field, 2, &mut rng);
        let cx = Complexes::new(&module).unwrap();
        let c = random_cocycle(&cx, &mut rng);
        let split = build_extension(&module, &c).unwrap();
        let n = split.hat.dim();
        let p = random_invertible(field, n, &mut rng);
        let inv = p.inverse().unwrap();
        let presented = ExtensionData {
            base: split.base.clone(),
            hat: split.hat.base_change(&p).unwrap(),
            incl: inv.mul(&split.incl),
            proj: split.proj.mul(&p),
            section: None,
            retraction: None,
        };
        prop_assert!(check_extension(&presented).unwrap().is_pass());
        let t = any_section(&presented).unwrap();
        prop_assert_eq!(&induced_bimodule(&presented, &t).unwrap(), &module);
        let c2 = extract_cocycle(&presented, &t).unwrap();
        let (normal, _) = normalize(&presented, &t).unwrap();
        prop_assert_eq!(&normal, &build_extension(&module, &c2).unwrap());
        let diff = rbsys::cohomology::Cochain {
            tag: rbsys::cohomology::ComplexTag::Rbs,
            degree: 2,
            coords: c2.sub(&c).to_cochain(&cx).unwrap().coords,
        };
        prop_assert!(cx.coboundary_preimage(&diff).unwrap().is_some());
    }
}
