//! Exhaustive coherence sweep over small braid closures.  Slow; run with
//! `cargo test --test exhaustive -- --ignored`.

use khtangle::burnside::{BurnsideCube, LadybugRule};
use khtangle::complex::TangleComplex;
use khtangle::corpus;

fn words(letters: &[usize], len: usize) -> Vec<Vec<(usize, bool)>> {
    let mut out: Vec<Vec<(usize, bool)>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().flat_map(move |&i| {
                    let w = w.clone();
                    [true, false].into_iter().map(move |s| {
                        let mut w2 = w.clone();
                        w2.push((i, s));
                        w2
                    })
                })
            })
            .collect();
    }
    out
}

#[test]
#[ignore = "slow exhaustive sweep"]
fn all_small_braid_closures_are_coherent() {
    let mut ladybugs = 0usize;
    // Two strands up to five crossings, three strands up to three crossings.
    let mut cases: Vec<(usize, Vec<(usize, bool)>)> = Vec::new();
    for len in 1..=5 {
        cases.extend(words(&[1], len).into_iter().map(|w| (2, w)));
    }
    for len in 1..=3 {
        cases.extend(words(&[1, 2], len).into_iter().map(|w| (3, w)));
    }
    for (k, word) in cases {
        let t = corpus::closed_braid(k, &word).unwrap();
        let cpx = TangleComplex::new(&t).unwrap();
        let cube = BurnsideCube::new(&cpx, LadybugRule::Standard).unwrap();
        let report = cube
            .check_all()
            .unwrap_or_else(|e| panic!("k={k} word={word:?}: {e}"));
        ladybugs += report.ladybug_faces;
    }
    assert!(ladybugs > 0);
}
