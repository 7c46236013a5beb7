//! The acceptance gate: nine criteria, each reported as a single PASS/FAIL
//! line.  Run with `--nocapture` to see the lines on success; on failure the
//! report is printed as part of the panic.

mod common;

use khtangle::arc_algebra::ArcAlgebra;
use khtangle::burnside::{BurnsideCube, LadybugRule};
use khtangle::complex::TangleComplex;
use khtangle::corpus;
use khtangle::diagram::compose_tangles;
use khtangle::hochschild::{hochschild, HochschildReport};
use khtangle::homology::{khovanov_homology, khovanov_homology_at, BigradedHomology};
use khtangle::matching::enumerate_matchings;
use khtangle::tensor::verify_gluing;
use num_bigint::BigInt;

type Verdict = Result<String, String>;

fn c1_catalan() -> Verdict {
    let want = [1usize, 1, 2, 5, 14, 42];
    for (n, &w) in want.iter().enumerate() {
        let got = enumerate_matchings(n).len();
        if got != w {
            return Err(format!("enumerate_matchings({n}) returned {got}, expected {w}"));
        }
    }
    Ok("matching counts 1,1,2,5,14,42 for n=0..5".into())
}

fn c2_arc_algebras() -> Verdict {
    for n in 0..=3 {
        let h = ArcAlgebra::new(n).map_err(|e| e.to_string())?;
        // verify covers unitality, idempotent orthogonality, grading
        // additivity, associativity, and surgery-order independence.
        h.verify().map_err(|e| e.to_string())?;
        // Independent rank oracle: sum of 2^{#circles(a b̄)} with circles
        // counted by union-find over the 2n endpoints.
        let ms = enumerate_matchings(n);
        let mut expected = 0usize;
        for a in &ms {
            for b in &ms {
                let mut parent: Vec<usize> = (0..2 * n).collect();
                fn find(p: &mut Vec<usize>, x: usize) -> usize {
                    if p[x] == x {
                        x
                    } else {
                        let r = find(p, p[x]);
                        p[x] = r;
                        r
                    }
                }
                for &(i, j) in a.pairs().iter().chain(b.pairs()) {
                    let (ri, rj) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
                    parent[ri] = rj;
                }
                let mut roots: Vec<usize> = (0..2 * n).map(|x| find(&mut parent, x)).collect();
                roots.sort_unstable();
                roots.dedup();
                expected += 1usize << roots.len();
            }
        }
        if h.rank() != expected {
            return Err(format!("H^{n} rank {} but circle-count oracle gives {expected}", h.rank()));
        }
        if n == 2 && h.rank() != 12 {
            return Err(format!("H^2 rank {} != 12", h.rank()));
        }
    }
    Ok("H^0..H^3 verified; rank oracle matches (H^2 = 12)".into())
}

fn c3_complexes() -> Verdict {
    let corpus = corpus::standard_corpus();
    if corpus.len() < 12 {
        return Err(format!("corpus has only {} diagrams", corpus.len()));
    }
    for (name, t) in &corpus {
        if t.num_crossings() > 8 {
            return Err(format!("{name} has more than 8 crossings"));
        }
        let cpx = TangleComplex::new(t).map_err(|e| format!("{name}: {e}"))?;
        cpx.verify().map_err(|e| format!("{name}: {e}"))?;
        let hl = ArcAlgebra::new(t.m()).map_err(|e| e.to_string())?;
        let hr = ArcAlgebra::new(t.n()).map_err(|e| e.to_string())?;
        cpx.verify_bimodule(&hl, &hr)
            .map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "{} corpus complexes pass d²=0, grading, and bimodule checks",
        corpus.len()
    ))
}

fn c4_burnside() -> Verdict {
    let mut ladybugs = 0usize;
    let mut corrupted_failures = 0usize;
    for (name, t) in corpus::standard_corpus() {
        let cpx = TangleComplex::new(&t).map_err(|e| format!("{name}: {e}"))?;
        let cube = BurnsideCube::new(&cpx, LadybugRule::Standard)
            .map_err(|e| format!("{name}: {e}"))?;
        let report = cube.check_all().map_err(|e| format!("{name}: {e}"))?;
        ladybugs += report.ladybug_faces;
        let bad = BurnsideCube::new(&cpx, LadybugRule::Corrupted)
            .and_then(|c| c.check_all());
        if bad.is_err() {
            corrupted_failures += 1;
        }
    }
    if ladybugs == 0 {
        return Err("no ladybug face was ever exercised".into());
    }
    if corrupted_failures == 0 {
        return Err("negative control: the corrupted ladybug rule never failed".into());
    }
    Ok(format!(
        "all faces and hexagons coherent ({ladybugs} ladybug pairings); corrupted rule fails on {corrupted_failures} cubes"
    ))
}

fn c5_homology() -> Verdict {
    let corpus = corpus::standard_corpus();
    // Unknot pin.
    for (name, t) in corpus::unknot_diagrams() {
        let cpx = TangleComplex::new(&t).map_err(|e| e.to_string())?;
        let h = common::library_homology(&cpx);
        let want: std::collections::BTreeMap<(i64, i64), (usize, Vec<BigInt>)> =
            [((0, -1), (1, vec![])), ((0, 1), (1, vec![]))].into();
        if h != want {
            return Err(format!("{name}: unknot homology is {h:?}"));
        }
    }
    // Whole corpus vs the naive oracle, entry for entry including torsion.
    for (name, t) in &corpus {
        let cpx = TangleComplex::new(t).map_err(|e| format!("{name}: {e}"))?;
        let lib = common::library_homology(&cpx);
        let naive = common::naive_homology(&cpx);
        if lib != naive {
            return Err(format!("{name}: homology differs from the naive oracle"));
        }
    }
    // Trefoil torsion.
    let trefoil = &corpus.iter().find(|(n, _)| *n == "trefoil-right").unwrap().1;
    let cpx = TangleComplex::new(trefoil).map_err(|e| e.to_string())?;
    let two = BigInt::from(2);
    let has_two = common::library_homology(&cpx)
        .values()
        .any(|(_, tors)| tors.contains(&two));
    if !has_two {
        return Err("trefoil closure has no Z/2 torsion".into());
    }
    Ok(format!(
        "{} corpus homologies equal the naive oracle; trefoil shows Z/2",
        corpus.len()
    ))
}

fn c6_reidemeister() -> Verdict {
    let pairs = corpus::reidemeister_pairs();
    if pairs.len() < 6 {
        return Err(format!("only {} pairs", pairs.len()));
    }
    for (name, t1, t2) in &pairs {
        let compare = || -> Result<(BigradedHomology, BigradedHomology), String> {
            let c1 = TangleComplex::new(t1).map_err(|e| e.to_string())?;
            let c2 = TangleComplex::new(t2).map_err(|e| e.to_string())?;
            // Per-(a,b) comparison, then totals.
            for a in 0..c1.left_matchings().len() {
                for b in 0..c1.right_matchings().len() {
                    let h1 = khovanov_homology_at(&c1, a, b, true).map_err(|e| e.to_string())?;
                    let h2 = khovanov_homology_at(&c2, a, b, true).map_err(|e| e.to_string())?;
                    if h1 != h2 {
                        return Err(format!("block ({a},{b}) differs"));
                    }
                }
            }
            Ok((
                khovanov_homology(&c1).map_err(|e| e.to_string())?,
                khovanov_homology(&c2).map_err(|e| e.to_string())?,
            ))
        };
        let (h1, h2) = compare().map_err(|e| format!("{name}: {e}"))?;
        if h1 != h2 {
            return Err(format!("{name}: total homology differs"));
        }
    }
    Ok(format!("{} move/reorder pairs have equal bigraded homology", pairs.len()))
}

fn c7_gluing() -> Verdict {
    let pairs = corpus::gluing_pairs();
    if pairs.len() < 6 {
        return Err(format!("only {} pairs", pairs.len()));
    }
    for (name, t1, t2) in &pairs {
        verify_gluing(t1, t2).map_err(|e| format!("{name}: {e}"))?;
    }
    // cup ∘ cap reproduces the unknot table.
    let report = verify_gluing(&corpus::cup(), &corpus::cap()).map_err(|e| e.to_string())?;
    let keys: Vec<(i64, i64)> = report.homology.groups.keys().copied().collect();
    if keys != vec![(0, -1), (0, 1)] {
        return Err(format!("cup∘cap homology supported at {keys:?}"));
    }
    Ok(format!(
        "{} composable pairs glue isomorphically; cup∘cap gives the unknot",
        pairs.len()
    ))
}

fn c8_hochschild() -> Verdict {
    let cpx = TangleComplex::new(&corpus::identity_tangle(2)).map_err(|e| e.to_string())?;
    let h1 = ArcAlgebra::new(1).map_err(|e| e.to_string())?;
    let rep = hochschild(&cpx, &h1, 4).map_err(|e| e.to_string())?;
    let rank0: usize = rep
        .groups
        .groups
        .iter()
        .filter(|(&(t, _), _)| t == 0)
        .map(|(_, g)| g.free_rank)
        .sum();
    if rank0 != 2 {
        return Err(format!("HH at t=0 of the identity tangle has rank {rank0}, expected 2"));
    }
    // Truncation stability.
    for t in [corpus::identity_tangle(2), corpus::braid_tangle(2, &[(1, true)]).unwrap()] {
        let cpx = TangleComplex::new(&t).map_err(|e| e.to_string())?;
        let a = hochschild(&cpx, &h1, 3).map_err(|e| e.to_string())?;
        let b = hochschild(&cpx, &h1, 4).map_err(|e| e.to_string())?;
        let cut = a.stable_t_max.min(b.stable_t_max);
        let fa: Vec<_> = a.groups.groups.iter().filter(|(&(tt, _), _)| tt <= cut).collect();
        let fb: Vec<_> = b.groups.groups.iter().filter(|(&(tt, _), _)| tt <= cut).collect();
        if fa != fb {
            return Err("truncation at k=3 and k=4 disagree on the stable range".into());
        }
    }
    // Trace property on three pairs.
    let pairs = [
        (
            corpus::braid_tangle(2, &[(1, true)]).unwrap(),
            corpus::braid_tangle(2, &[(1, false)]).unwrap(),
        ),
        (
            corpus::braid_tangle(2, &[(1, true), (1, true)]).unwrap(),
            corpus::braid_tangle(2, &[(1, true)]).unwrap(),
        ),
        (corpus::cup(), corpus::cap()),
    ];
    for (t1, t2) in &pairs {
        let (t12, _, _) = compose_tangles(t1, t2).map_err(|e| e.to_string())?;
        let (t21, _, _) = compose_tangles(t2, t1).map_err(|e| e.to_string())?;
        let run = |t: &khtangle::diagram::TangleDiagram| -> Result<(i64, BigradedHomology), String> {
            let cpx = TangleComplex::new(t).map_err(|e| e.to_string())?;
            let h = ArcAlgebra::new(t.n()).map_err(|e| e.to_string())?;
            let rep: HochschildReport = hochschild(&cpx, &h, 4).map_err(|e| e.to_string())?;
            let (p, m) = t.writhe_counts();
            let (dh, dq) = (-(m as i64), p as i64 - 2 * m as i64);
            Ok((rep.stable_t_max + dh, rep.groups.shifted(dh, dq)))
        };
        let (s12, g12) = run(&t12)?;
        let (s21, g21) = run(&t21)?;
        let cut = s12.min(s21);
        let f = |g: &BigradedHomology| -> Vec<_> {
            g.groups
                .iter()
                .filter(|(&(tt, _), _)| tt <= cut)
                .map(|(&k, v)| (k, v.clone()))
                .collect::<Vec<_>>()
        };
        if f(&g12) != f(&g21) {
            return Err("trace property fails: HH(T1T2) ≠ HH(T2T1)".into());
        }
    }
    Ok("identity-tangle HH rank 2 at t=0; truncation stable; trace property on 3 pairs".into())
}

fn c9_one_crossing_fixture() -> Verdict {
    let t = corpus::sec63_tangle();
    let cpx = TangleComplex::new(&t).map_err(|e| e.to_string())?;
    let at = |b: usize| -> Result<Vec<(i64, i64)>, String> {
        Ok(khovanov_homology_at(&cpx, 0, b, false)
            .map_err(|e| e.to_string())?
            .groups
            .iter()
            .filter(|(_, g)| g.free_rank > 0 || !g.torsion.is_empty())
            .map(|(&k, _)| k)
            .collect())
    };
    let a0 = at(0)?;
    let a1 = at(1)?;
    if a0 != vec![(0, 2), (0, 4)] {
        return Err(format!("matching 0 block supported at {a0:?}"));
    }
    if a1 != vec![(-1, -1), (-1, 1)] {
        return Err(format!("matching 1 block supported at {a1:?}"));
    }
    Ok("one-crossing (0,4)-tangle per-matching homology matches the frozen table".into())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("catalan counts", c1_catalan),
        ("arc algebras", c2_arc_algebras),
        ("corpus complexes", c3_complexes),
        ("burnside coherence", c4_burnside),
        ("homology vs oracle", c5_homology),
        ("reidemeister invariance", c6_reidemeister),
        ("gluing isomorphism", c7_gluing),
        ("hochschild homology", c8_hochschild),
        ("one-crossing fixture", c9_one_crossing_fixture),
    ];
    let mut lines = Vec::new();
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let line = match f() {
            Ok(detail) => format!("criterion {} ({name}): PASS — {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                format!("criterion {} ({name}): FAIL — {detail}", i + 1)
            }
        };
        println!("{line}");
        lines.push(line);
    }
    assert_eq!(failures, 0, "acceptance failures:\n{}", lines.join("\n"));
    // No pipeline exercised above ever evaluates the counit.
    assert_eq!(khtangle::frobenius::counit_invocations(), 0);
}
