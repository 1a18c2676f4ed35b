use presmod::field::Field;
use presmod::graded::{barcode_of_presentation, Side};
use presmod::interval::Barcode;
use presmod::oracle::{pointwise_barcode, pointwise_homology_barcode};
use presmod::pres_hom::homology_of_pair;
use presmod::pres_pers_mod::{pres_complex, pres_pers_mod, present_module};
use presmod::random::{random_complex, random_module, random_morphism};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(p: u64) -> Field {
    Field::new(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn presented_homology_matches_pointwise(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), m in 0usize..6) {
        let k = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = random_complex(k, m, 6, &mut rng);
        let (f0, g0) = pres_complex(&raw).unwrap();
        let got = homology_of_pair(&f0, &g0, 0, false).unwrap();
        prop_assert_eq!(got, pointwise_homology_barcode(&raw, 0).unwrap());
    }

    #[test]
    fn presented_morphism_sides_match_modules(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), m in 0usize..6) {
        let k = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = random_morphism(k, m, 6, &mut rng);
        let f = pres_pers_mod(&raw).unwrap();
        f.validate().unwrap();
        prop_assert_eq!(barcode_of_presentation(&f, Side::Domain, false), pointwise_barcode(k, &raw.source, 0).unwrap());
        prop_assert_eq!(barcode_of_presentation(&f, Side::Codomain, false), pointwise_barcode(k, &raw.target, 0).unwrap());
    }

    #[test]
    fn single_module_presentation_matches_ranks(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7]), m in 0usize..7) {
        let k = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let module = random_module(k, m, 5, &mut rng);
        let bars = present_module(k, &module).unwrap();
        let got = Barcode::from_intervals(0, bars).filtered(false);
        prop_assert_eq!(got, pointwise_barcode(k, &module, 0).unwrap());
    }
}
