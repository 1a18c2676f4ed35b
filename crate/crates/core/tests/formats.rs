use presmod::cosheaf_tower::final_complex;
use presmod::field::Field;
use presmod::io::*;
use presmod::random::*;
use presmod::simplicial::SimplicialComplex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn every_format_round_trips(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let k = Field::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(0..4);

        let f = random_annotated(k, random_intervals(3, m, &mut rng), random_intervals(4, m, &mut rng), 0.5, &mut rng);
        prop_assert_eq!(parse_annmat(&write_annmat(&f)).unwrap().value, f);

        let mor = random_morphism(k, m, 4, &mut rng);
        prop_assert_eq!(parse_rawmod(&write_rawmod(&mor)).unwrap().value, mor);

        let cplx = random_complex(k, m, 4, &mut rng);
        prop_assert_eq!(parse_rawcplx(&write_rawcplx(&cplx)).unwrap().value, cplx);

        let tower = random_tower(k, 12, 4, 2, &mut rng);
        prop_assert_eq!(parse_tower(&write_tower(&tower)).unwrap().value, tower.clone());

        let cosheaf = random_cosheaf(k, &final_complex(&tower).unwrap(), 2, &mut rng);
        let (t2, c2) = parse_cosheaf(&write_cosheaf(&tower, &cosheaf)).unwrap().value;
        prop_assert_eq!(t2, tower);
        prop_assert_eq!(c2, cosheaf);

        let complex = SimplicialComplex::from_maximal(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
        let sheaf = random_sheaf(k, complex, m, 2, &mut rng);
        let text = write_sheaf(&sheaf);
        prop_assert_eq!(write_sheaf(&parse_sheaf(&text, Field::Z2).unwrap().value), text);

        let poset = random_poset_sheaf(k, random_poset(5, 0.4, &mut rng), m, 2, &mut rng);
        let text = write_poset(&poset);
        prop_assert_eq!(write_poset(&parse_poset(&text, Field::Z2).unwrap().value), text);
    }
}
