//! Programmatic builders for the fixture corpus: braid closures, braid-word
//! tangles, kinks, cups/caps and flat matchings.  The committed `corpus/*.tgl`
//! files are generated from these builders (see the corpus tests).

use crate::diagram::{compose_tangles, TangleDiagram};
use crate::error::Result;
use crate::matching::CrossinglessMatching;
use std::collections::HashMap;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{}", i + 1)).collect()
}

/// The 0-crossing unknot: one free loop.
pub fn unknot_zero() -> TangleDiagram {
    TangleDiagram::new(0, 0, names(1), vec![], vec![], vec![], vec![vec![0]]).unwrap()
}

/// A 1-crossing unknot (one Reidemeister-I kink of the given sign).
pub fn kink(positive: bool) -> TangleDiagram {
    // Slots counterclockwise from the incoming under-strand.  Edge 0 is the
    // long way round, edge 1 the small loop.
    let crossings = if positive {
        vec![[0, 0, 1, 1]]
    } else {
        vec![[0, 1, 1, 0]]
    };
    TangleDiagram::new(0, 0, names(2), crossings, vec![], vec![], vec![vec![0, 1]]).unwrap()
}

/// Trace closure of a braid word on `k` strands.  Word letters are
/// `(i, positive)` with `1 <= i < k` for the generator crossing strands
/// `i, i+1`.  All strands are oriented in the braid direction, so positive
/// letters are positive crossings.
pub fn closed_braid(k: usize, word: &[(usize, bool)]) -> Result<TangleDiagram> {
    assert!(k >= 1);
    let mut pending: Vec<usize> = (0..k).collect();
    let mut nseg = k;
    let mut crossings: Vec<[usize; 4]> = Vec::new();
    let mut succ: HashMap<usize, usize> = HashMap::new();
    for &(i, positive) in word {
        assert!((1..k).contains(&i), "generator index out of range");
        let a = pending[i - 1];
        let b = pending[i];
        let c = nseg; // lower-right
        let d = nseg + 1; // upper-right
        nseg += 2;
        crossings.push(if positive { [a, c, d, b] } else { [b, a, c, d] });
        succ.insert(a, d);
        succ.insert(b, c);
        pending[i - 1] = c;
        pending[i] = d;
    }
    // Close up: the final segment at each position is the initial one.
    let mut rep: Vec<usize> = (0..nseg).collect();
    fn find(r: &mut Vec<usize>, x: usize) -> usize {
        if r[x] != x {
            let t = find(r, r[x]);
            r[x] = t;
        }
        r[x]
    }
    for p in 0..k {
        let (a, b) = (find(&mut rep, pending[p]), find(&mut rep, p));
        if a != b {
            rep[a] = b;
        }
    }
    let mut class: HashMap<usize, usize> = HashMap::new();
    let mut ne = 0usize;
    let mut seg_class = vec![0usize; nseg];
    for s in 0..nseg {
        let r = find(&mut rep, s);
        let id = *class.entry(r).or_insert_with(|| {
            ne += 1;
            ne - 1
        });
        seg_class[s] = id;
    }
    let crossings: Vec<[usize; 4]> = crossings
        .iter()
        .map(|cr| [seg_class[cr[0]], seg_class[cr[1]], seg_class[cr[2]], seg_class[cr[3]]])
        .collect();
    // Component walks: follow the strand flow over raw segments, collapsing
    // the identified final/initial segments.
    let wrap: HashMap<usize, usize> = (0..k).map(|p| (pending[p], p)).collect();
    let mut visited = vec![false; nseg];
    let mut orientations = Vec::new();
    for s0 in 0..nseg {
        if visited[s0] {
            continue;
        }
        let mut walk_raw = Vec::new();
        let mut s = s0;
        loop {
            if visited[s] {
                break;
            }
            visited[s] = true;
            walk_raw.push(s);
            s = if let Some(&n) = succ.get(&s) {
                n
            } else {
                wrap[&s]
            };
        }
        let mut walk: Vec<usize> = Vec::new();
        for s in walk_raw {
            let c = seg_class[s];
            if walk.last() != Some(&c) {
                walk.push(c);
            }
        }
        if walk.len() > 1 && walk.first() == walk.last() {
            walk.pop();
        }
        orientations.push(walk);
    }
    TangleDiagram::new(0, 0, names(ne), crossings, vec![], vec![], orientations)
}

/// Braid word as a `(k,k)`-tangle (`k` even), strands oriented left-to-right.
pub fn braid_tangle(k: usize, word: &[(usize, bool)]) -> Result<TangleDiagram> {
    assert!(k % 2 == 0, "tangle boundaries must be even");
    let mut pending: Vec<usize> = (0..k).collect();
    let mut nseg = k;
    let mut crossings: Vec<[usize; 4]> = Vec::new();
    let mut succ: HashMap<usize, usize> = HashMap::new();
    for &(i, positive) in word {
        assert!((1..k).contains(&i));
        let a = pending[i - 1];
        let b = pending[i];
        let c = nseg;
        let d = nseg + 1;
        nseg += 2;
        crossings.push(if positive { [a, c, d, b] } else { [b, a, c, d] });
        succ.insert(a, d);
        succ.insert(b, c);
        pending[i - 1] = c;
        pending[i] = d;
    }
    let left_boundary: Vec<usize> = (0..k).collect();
    let right_boundary: Vec<usize> = pending.clone();
    let mut orientations = Vec::new();
    for p in 0..k {
        let mut walk = vec![p];
        let mut s = p;
        while let Some(&n) = succ.get(&s) {
            walk.push(n);
            s = n;
        }
        orientations.push(walk);
    }
    TangleDiagram::new(
        k / 2,
        k / 2,
        names(nseg),
        crossings,
        left_boundary,
        right_boundary,
        orientations,
    )
}

/// Identity `(k,k)`-tangle, strands left-to-right.
pub fn identity_tangle(k: usize) -> TangleDiagram {
    assert!(k % 2 == 0);
    TangleDiagram::new(
        k / 2,
        k / 2,
        names(k),
        vec![],
        (0..k).collect(),
        (0..k).collect(),
        (0..k).map(|e| vec![e]).collect(),
    )
    .unwrap()
}

/// Flat `(0,2n)`-tangle of a crossingless matching: one arc per pair.  Arc
/// directions are flexible, so gluing picks whatever is consistent.
pub fn flat_right(a: &CrossinglessMatching) -> TangleDiagram {
    let n = a.n();
    let mut right_boundary = vec![0usize; 2 * n];
    for (i, &(p, q)) in a.pairs().iter().enumerate() {
        right_boundary[p - 1] = i;
        right_boundary[q - 1] = i;
    }
    TangleDiagram::new(
        0,
        n,
        names(n),
        vec![],
        vec![],
        right_boundary,
        (0..n).map(|e| vec![e]).collect(),
    )
    .unwrap()
}

/// Flat `(2n,0)`-tangle of a crossingless matching.
pub fn flat_left(a: &CrossinglessMatching) -> TangleDiagram {
    let n = a.n();
    let mut left_boundary = vec![0usize; 2 * n];
    for (i, &(p, q)) in a.pairs().iter().enumerate() {
        left_boundary[p - 1] = i;
        left_boundary[q - 1] = i;
    }
    TangleDiagram::new(
        n,
        0,
        names(n),
        vec![],
        left_boundary,
        vec![],
        (0..n).map(|e| vec![e]).collect(),
    )
    .unwrap()
}

/// The `(0,2)` cup and `(2,0)` cap.
pub fn cup() -> TangleDiagram {
    flat_right(&CrossinglessMatching::new(1, vec![(1, 2)]).unwrap())
}
pub fn cap() -> TangleDiagram {
    flat_left(&CrossinglessMatching::new(1, vec![(1, 2)]).unwrap())
}

/// The one-crossing `(0,4)`-tangle of the worked ladybug example: two cups
/// with a single (positive) crossing between the middle strands.  Its
/// 0-resolution is the flat tangle {(1,2),(3,4)} and its 1-resolution is
/// {(1,4),(2,3)}.
pub fn sec63_tangle() -> TangleDiagram {
    // e0: right point 1 through the lower cup into the crossing (under, in)
    // e1: crossing out to right point 3
    // e2: right point 4 through the upper cup into the crossing (over, in)
    // e3: crossing out to right point 2
    TangleDiagram::new(
        0,
        2,
        names(4),
        vec![[0, 3, 1, 2]],
        vec![],
        vec![0, 3, 1, 2],
        vec![vec![0, 1], vec![2, 3]],
    )
    .unwrap()
}

/// `(2,4)`-tangle: a braid word on 2 strands followed by a cup inserted at
/// right position `i` (0-based, `i <= 2`).
pub fn tangle_2_4(word: &[(usize, bool)], i: usize) -> Result<TangleDiagram> {
    assert!(i <= 2);
    let head = braid_tangle(2, word)?;
    // Cup piece: (2,4) with strands at the non-cup positions.
    let mut right_boundary = vec![usize::MAX; 4];
    let strand_pos: Vec<usize> = (0..4).filter(|&p| p != i && p != i + 1).collect();
    right_boundary[strand_pos[0]] = 0;
    right_boundary[strand_pos[1]] = 1;
    right_boundary[i] = 2;
    right_boundary[i + 1] = 2;
    let cup_piece = TangleDiagram::new(
        1,
        2,
        names(3),
        vec![],
        vec![0, 1],
        right_boundary,
        vec![vec![0], vec![1], vec![2]],
    )?;
    let (t, _, _) = compose_tangles(&head, &cup_piece)?;
    Ok(t)
}

/// `(4,0)`-tangle with caps {(1,2),(3,4)}.
pub fn capcap_for_sec63() -> TangleDiagram {
    flat_left(&CrossinglessMatching::new(2, vec![(1, 2), (3, 4)]).unwrap())
}

/// Check that two diagrams have identical structure up to edge renaming.
pub fn same_shape(a: &TangleDiagram, b: &TangleDiagram) -> bool {
    a.m() == b.m()
        && a.n() == b.n()
        && a.crossings().len() == b.crossings().len()
        && a.num_edges() == b.num_edges()
        && a.crossings() == b.crossings()
        && a.left_boundary() == b.left_boundary()
        && a.right_boundary() == b.right_boundary()
}

/// The standard corpus: name -> diagram.  At least twelve diagrams with at
/// most eight crossings each.
pub fn standard_corpus() -> Vec<(&'static str, TangleDiagram)> {
    vec![
        ("unknot0", unknot_zero()),
        ("unknot-kink-pos", kink(true)),
        ("unknot-kink-neg", kink(false)),
        ("unknot-braid", closed_braid(2, &[(1, true)]).unwrap()),
        ("hopf", closed_braid(2, &[(1, true), (1, true)]).unwrap()),
        (
            "trefoil-right",
            closed_braid(2, &[(1, true), (1, true), (1, true)]).unwrap(),
        ),
        (
            "trefoil-left",
            closed_braid(2, &[(1, false), (1, false), (1, false)]).unwrap(),
        ),
        (
            "unknot-mixed3",
            closed_braid(2, &[(1, true), (1, true), (1, false)]).unwrap(),
        ),
        (
            "figure-eight",
            closed_braid(3, &[(1, true), (2, false), (1, true), (2, false)]).unwrap(),
        ),
        ("sec63", sec63_tangle()),
        ("id2", identity_tangle(2)),
        ("t22-pos", braid_tangle(2, &[(1, true)]).unwrap()),
        ("t22-neg", braid_tangle(2, &[(1, false)]).unwrap()),
        ("t22-sq", braid_tangle(2, &[(1, true), (1, true)]).unwrap()),
        (
            "t22-mixed",
            braid_tangle(2, &[(1, true), (1, false)]).unwrap(),
        ),
        ("t24-a", tangle_2_4(&[(1, true), (1, true)], 1).unwrap()),
        ("t24-b", tangle_2_4(&[(1, false)], 2).unwrap()),
        ("cup", cup()),
        ("cap", cap()),
    ]
}

/// Unknot fixtures by construction.
pub fn unknot_diagrams() -> Vec<(&'static str, TangleDiagram)> {
    vec![
        ("unknot0", unknot_zero()),
        ("unknot-kink-pos", kink(true)),
        ("unknot-kink-neg", kink(false)),
        ("unknot-braid", closed_braid(2, &[(1, true)]).unwrap()),
    ]
}

/// Pairs of diagrams related by Reidemeister moves or crossing reordering,
/// used by the invariance suite.
pub fn reidemeister_pairs() -> Vec<(&'static str, TangleDiagram, TangleDiagram)> {
    let trefoil = closed_braid(2, &[(1, true), (1, true), (1, true)]).unwrap();
    vec![
        ("r1-pos", unknot_zero(), kink(true)),
        ("r1-neg", unknot_zero(), kink(false)),
        ("r1-braid", unknot_zero(), closed_braid(2, &[(1, true)]).unwrap()),
        (
            "r2-trefoil",
            trefoil.clone(),
            closed_braid(2, &[(1, true), (1, true), (1, true), (1, true), (1, false)]).unwrap(),
        ),
        (
            "r3-hopf",
            closed_braid(3, &[(1, true), (2, true), (1, true)]).unwrap(),
            closed_braid(3, &[(2, true), (1, true), (2, true)]).unwrap(),
        ),
        (
            "reorder-trefoil",
            trefoil.clone(),
            trefoil.reorder_crossings(&[2, 0, 1]).unwrap(),
        ),
        (
            "reorder-hopf",
            closed_braid(2, &[(1, true), (1, true)]).unwrap(),
            closed_braid(2, &[(1, true), (1, true)])
                .unwrap()
                .reorder_crossings(&[1, 0])
                .unwrap(),
        ),
    ]
}

/// Composable pairs for the gluing suite.
pub fn gluing_pairs() -> Vec<(&'static str, TangleDiagram, TangleDiagram)> {
    vec![
        ("cup-cap", cup(), cap()),
        ("pos-pos", braid_tangle(2, &[(1, true)]).unwrap(), braid_tangle(2, &[(1, true)]).unwrap()),
        (
            "sq-pos",
            braid_tangle(2, &[(1, true), (1, true)]).unwrap(),
            braid_tangle(2, &[(1, true)]).unwrap(),
        ),
        (
            "pos-neg",
            braid_tangle(2, &[(1, true)]).unwrap(),
            braid_tangle(2, &[(1, false)]).unwrap(),
        ),
        ("id-pos", identity_tangle(2), braid_tangle(2, &[(1, true)]).unwrap()),
        ("sec63-capcap", sec63_tangle(), capcap_for_sec63()),
        ("cup-neg", cup(), braid_tangle(2, &[(1, false)]).unwrap()),
    ]
}
