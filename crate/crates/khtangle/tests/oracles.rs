//! Cross-checks of the main computational pipeline against independent,
//! deliberately naive re-implementations living in `common`.

mod common;

use khtangle::complex::TangleComplex;
use khtangle::corpus;

#[test]
fn circle_counts_match_union_find() {
    for (name, t) in corpus::standard_corpus() {
        let cpx = TangleComplex::new(&t).unwrap();
        let nc = t.num_crossings();
        for a in 0..cpx.left_matchings().len() {
            for b in 0..cpx.right_matchings().len() {
                for v in 0..(1u32 << nc) {
                    let expected = common::union_find_circles(
                        &t,
                        v,
                        &cpx.left_matchings()[a],
                        &cpx.right_matchings()[b],
                    );
                    assert_eq!(
                        cpx.circle_count(a, b, v),
                        expected,
                        "{name}: circle count differs at a={a} b={b} v={v:b}"
                    );
                }
            }
        }
    }
}

#[test]
fn homology_matches_naive_oracle() {
    for (name, t) in corpus::standard_corpus() {
        let cpx = TangleComplex::new(&t).unwrap();
        let naive = common::naive_homology(&cpx);
        let lib = common::library_homology(&cpx);
        assert_eq!(lib, naive, "{name}: homology disagrees with the naive oracle");
    }
}

#[test]
fn euler_characteristic_is_chain_level() {
    for (name, t) in corpus::standard_corpus() {
        let cpx = TangleComplex::new(&t).unwrap();
        let from_gens = common::euler_from_generators(&cpx);
        let from_hom = common::euler_from_homology(&common::library_homology(&cpx));
        assert_eq!(from_gens, from_hom, "{name}: Euler characteristic mismatch");
    }
}

#[test]
fn closed_corpus_euler_matches_known_jones() {
    // Unnormalized Jones polynomials (Kauffman-bracket grading) of the small
    // closed fixtures, as maps q-exponent -> coefficient.  The fixture braid
    // closures realize the mirrors of the usual positive-braid links.
    let cases: Vec<(&str, Vec<(i64, i64)>)> = vec![
        ("unknot0", vec![(-1, 1), (1, 1)]),
        ("unknot-kink-pos", vec![(-1, 1), (1, 1)]),
        ("unknot-kink-neg", vec![(-1, 1), (1, 1)]),
        ("unknot-braid", vec![(-1, 1), (1, 1)]),
        ("hopf", vec![(-6, 1), (-4, 1), (-2, 1), (0, 1)]),
        ("trefoil-right", vec![(-9, -1), (-5, 1), (-3, 1), (-1, 1)]),
        ("trefoil-left", vec![(1, 1), (3, 1), (5, 1), (9, -1)]),
        // (q+1/q)·V(4_1)(q²) collapses to q⁻⁵ + q⁵.
        ("figure-eight", vec![(-5, 1), (5, 1)]),
    ];
    let corpus = corpus::standard_corpus();
    for (name, want) in cases {
        let t = &corpus.iter().find(|(n, _)| *n == name).unwrap().1;
        let cpx = TangleComplex::new(t).unwrap();
        let chi: Vec<(i64, i64)> = common::euler_from_generators(&cpx).into_iter().collect();
        assert_eq!(chi, want, "{name}: graded Euler characteristic is not the known Jones polynomial");
    }
}
