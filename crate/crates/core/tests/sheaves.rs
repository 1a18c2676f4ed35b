use presmod::field::Field;
use presmod::matrix::DenseMatrix;
use presmod::oracle::pointwise_homology_barcode;
use presmod::random::{er_graph_sheaf, random_sheaf};
use presmod::sheaf::{build_cochain_raw, local_presentations, local_sheaf_cohomology, persistent_sheaf_cohomology};
use presmod::simplicial::SimplicialComplex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shapes() -> Vec<SimplicialComplex> {
    [
        vec![vec![0, 1, 2]],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4]],
        vec![vec![0, 1, 2, 3]],
    ]
    .iter()
    .map(|m| SimplicialComplex::from_maximal(m).unwrap())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn direct_and_local_routes_match_the_oracle(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let k = Field::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let complex = shapes()[rng.gen_range(0..4)].clone();
        let m = rng.gen_range(0..5);
        let sheaf = random_sheaf(k, complex.clone(), m, 2, &mut rng);
        for deg in 0..=complex.dim().unwrap() {
            let raw = build_cochain_raw(&sheaf, deg).unwrap();
            let expect = pointwise_homology_barcode(&raw, deg).unwrap();
            prop_assert_eq!(&persistent_sheaf_cohomology(&sheaf, deg, false).unwrap(), &expect);
            prop_assert_eq!(&local_sheaf_cohomology(&sheaf, deg, 2, false).unwrap(), &expect);
        }
    }

    #[test]
    fn coboundaries_square_to_zero(seed in any::<u64>()) {
        let k = Field::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let complex = SimplicialComplex::from_maximal(&[vec![0, 1, 2]]).unwrap();
        let sheaf = random_sheaf(k, complex, rng.gen_range(0..=4), 2, &mut rng);
        let raw = build_cochain_raw(&sheaf, 1).unwrap();
        for (f, g) in raw.f.iter().zip(&raw.g) {
            let gf: DenseMatrix = g.mul(k, f);
            prop_assert!(gf.is_zero());
        }
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sheaf = er_graph_sheaf(Field::Z2, 8, 0.4, 12, 3, &mut rng);
    let one = local_sheaf_cohomology(&sheaf, 0, 1, true).unwrap();
    for threads in [2, 4, 8] {
        assert_eq!(local_sheaf_cohomology(&sheaf, 0, threads, true).unwrap(), one);
    }
    assert_eq!(persistent_sheaf_cohomology(&sheaf, 0, true).unwrap(), one);
}

#[test]
fn full_length_stalks_compress_by_the_horizon() {
    let complex = SimplicialComplex::from_maximal(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
    let m = 20;
    let mut sheaf = presmod::sheaf::SheafInstance::new(Field::Z2, complex.clone(), m);
    for s in complex.simplices() {
        sheaf.set_stalk(s, vec![2; m + 1]).unwrap();
    }
    let local = local_presentations(&sheaf, 1).unwrap();
    assert_eq!(sheaf.size(), 2 * complex.len() * (m + 1));
    assert_eq!(local.generator_count(), sheaf.size() / (m + 1));
}
