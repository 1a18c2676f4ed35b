use presmod::cosheaf_tower::{cosheaf_tower_homology, final_complex, CosheafData};
use presmod::field::Field;
use presmod::oracle::{classical_persistence, tower_pointwise_barcode};
use presmod::random::{random_cosheaf, random_filtration, random_tower};
use presmod::tower::{tower_homology, tower_presentations_each, TowerScript};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn tower_matches_pointwise_oracle(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let k = Field::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let script = random_tower(k, 30, 10, 2, &mut rng);
        let got = tower_homology(&script, &[0, 1], false).unwrap();
        prop_assert_eq!(got, tower_pointwise_barcode(&script, None, &[0, 1]).unwrap());
    }

    #[test]
    fn every_intermediate_presentation_is_valid(seed in any::<u64>()) {
        let k = Field::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let script = random_tower(k, 25, 10, 2, &mut rng);
        tower_presentations_each(&script, 2, |_, mats| {
            for m in mats {
                m.validate()?;
            }
            Ok(())
        }).unwrap();
    }

    #[test]
    fn cosheaf_tower_matches_pointwise_oracle(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let k = Field::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let script = random_tower(k, 15, 5, 2, &mut rng);
        let f = random_cosheaf(k, &final_complex(&script).unwrap(), 3, &mut rng);
        let got = cosheaf_tower_homology(&script, &f, &[0, 1], false).unwrap();
        prop_assert_eq!(got, tower_pointwise_barcode(&script, Some(&f), &[0, 1]).unwrap());
    }

    #[test]
    fn constant_cosheaf_multiplies_bars(seed in any::<u64>(), d in 0usize..4) {
        let k = Field::Z2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let filtration = random_filtration(25, 2, &mut rng);
        let script = TowerScript::from_filtration(k, &filtration).unwrap();
        let one = tower_homology(&script, &[0, 1], false).unwrap();
        let mut expect = presmod::interval::Barcode::default();
        for _ in 0..d {
            expect = expect.merge(one.clone());
        }
        prop_assert_eq!(cosheaf_tower_homology(&script, &CosheafData::constant(d), &[0, 1], false).unwrap(), expect);
    }

    #[test]
    fn filtrations_agree_with_classical_persistence(seed in any::<u64>()) {
        let k = Field::Z2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let filtration = random_filtration(40, 2, &mut rng);
        let script = TowerScript::from_filtration(k, &filtration).unwrap();
        let mut expect = presmod::interval::Barcode::default();
        for deg in 0..=2 {
            expect = expect.merge(classical_persistence(k, &filtration, deg));
        }
        prop_assert_eq!(tower_homology(&script, &[0, 1, 2], false).unwrap(), expect);
    }
}
