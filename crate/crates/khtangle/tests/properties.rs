//! Randomized properties over small braid-closure diagrams.

mod common;

use khtangle::burnside::{BurnsideCube, LadybugRule};
use khtangle::complex::TangleComplex;
use khtangle::corpus;
use proptest::prelude::*;

fn braid_word() -> impl Strategy<Value = (usize, Vec<(usize, bool)>)> {
    (2usize..=3).prop_flat_map(|k| {
        let letter = (1..k, any::<bool>());
        (Just(k), proptest::collection::vec(letter, 1..=4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_braid_closures_verify((k, word) in braid_word()) {
        let t = corpus::closed_braid(k, &word).unwrap();
        let cpx = TangleComplex::new(&t).unwrap();
        cpx.verify().unwrap();

        // Burnside coherence with the standard ladybug rule.
        let cube = BurnsideCube::new(&cpx, LadybugRule::Standard).unwrap();
        cube.check_all().unwrap();

        // Circle counts agree with the union-find oracle.
        for v in 0..(1u32 << t.num_crossings()) {
            let expected = common::union_find_circles(
                &t,
                v,
                &cpx.left_matchings()[0],
                &cpx.right_matchings()[0],
            );
            prop_assert_eq!(cpx.circle_count(0, 0, v), expected);
        }

        // Exact homology agrees with the naive oracle, and the graded Euler
        // characteristic is a chain-level quantity.
        let lib = common::library_homology(&cpx);
        let naive = common::naive_homology(&cpx);
        prop_assert_eq!(&lib, &naive);
        prop_assert_eq!(
            common::euler_from_generators(&cpx),
            common::euler_from_homology(&lib)
        );
    }

    #[test]
    fn open_two_strand_braids_verify_as_bimodules(word in proptest::collection::vec((Just(1usize), any::<bool>()), 1..=4)) {
        let t = corpus::braid_tangle(2, &word).unwrap();
        let cpx = TangleComplex::new(&t).unwrap();
        cpx.verify().unwrap();
        let ha = khtangle::arc_algebra::ArcAlgebra::new(t.m()).unwrap();
        let hb = khtangle::arc_algebra::ArcAlgebra::new(t.n()).unwrap();
        cpx.verify_bimodule(&ha, &hb).unwrap();
        let lib = common::library_homology(&cpx);
        let naive = common::naive_homology(&cpx);
        prop_assert_eq!(lib, naive);
    }
}
