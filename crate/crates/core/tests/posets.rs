use presmod::field::Field;
use presmod::oracle::poset_limit_barcode;
use presmod::poset::{alternating_subposet, order_complex, poset_cohomology, FinitePoset, Route, DEFAULT_CHAIN_LIMIT};
use presmod::random::{random_poset, random_poset_sheaf, random_zigzag};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Chains counted by trying every subset of elements.
fn brute_force_chains(p: &FinitePoset) -> usize {
    let n = p.len();
    (1u32..1 << n)
        .filter(|mask| {
            let members: Vec<usize> = (0..n).filter(|x| mask >> x & 1 == 1).collect();
            members.iter().all(|&a| members.iter().all(|&b| p.leq(a, b) || p.leq(b, a)))
        })
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn order_complex_counts_chains(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=10);
        let p = random_poset(n, rng.gen_range(0.1..0.7), &mut rng);
        let oc = order_complex(&p, DEFAULT_CHAIN_LIMIT).unwrap();
        prop_assert_eq!(oc.complex.len(), brute_force_chains(&p));
        prop_assert_eq!(p.chain_count(), oc.complex.len() as u128);
    }

    #[test]
    fn degree_zero_is_the_limit(seed in any::<u64>(), q in prop::sample::select(vec![2u64, 3])) {
        let k = Field::new(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let p = random_poset(n, 0.4, &mut rng);
        let sheaf = random_poset_sheaf(k, p, rng.gen_range(0..=4), 2, &mut rng);
        let h0 = poset_cohomology(&sheaf, 0, Route::OrderComplex, DEFAULT_CHAIN_LIMIT, false).unwrap();
        prop_assert_eq!(h0, poset_limit_barcode(&sheaf).unwrap());
    }

    #[test]
    fn zigzag_routes_agree(seed in any::<u64>(), q in prop::sample::select(vec![2u64, 3, 5])) {
        let k = Field::new(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=12);
        let z = random_zigzag(n, &mut rng);
        let sheaf = random_poset_sheaf(k, z, rng.gen_range(0..=4), 2, &mut rng);
        for deg in 0..=2 {
            let full = poset_cohomology(&sheaf, deg, Route::OrderComplex, DEFAULT_CHAIN_LIMIT, false).unwrap();
            let short = poset_cohomology(&sheaf, deg, Route::Alternating, DEFAULT_CHAIN_LIMIT, false).unwrap();
            prop_assert_eq!(&full, &short);
            if deg == 2 {
                prop_assert!(full.is_empty());
            }
        }
    }

    #[test]
    fn alternating_subposet_alternates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_zigzag(rng.gen_range(1..=12), &mut rng);
        let (sub, picked) = alternating_subposet(&z).unwrap();
        prop_assert_eq!(picked.len() % 2, 1);
        for (j, &x) in picked.iter().enumerate() {
            if j % 2 == 0 {
                prop_assert!(z.is_minimal(x) && sub.is_minimal(j));
            } else {
                prop_assert!(z.is_maximal(x) && sub.is_maximal(j));
            }
        }
        prop_assert!(sub.is_zigzag());
    }
}
