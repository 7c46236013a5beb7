//! Shared helpers for the integration suites: a deliberately naive homology
//! oracle (dense matrices, textbook Smith reduction, no certificates) and a
//! union-find circle counter working straight off the diagram combinatorics.
//! Both are independent re-derivations of results the library computes by
//! other means.

// Each integration-test target compiles this module independently and uses a
// different subset of it.
#![allow(dead_code)]

use khtangle::complex::TangleComplex;
use khtangle::diagram::TangleDiagram;
use khtangle::matching::CrossinglessMatching;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// Textbook Smith reduction of a dense matrix: returns the invariant factors
/// (positive, with the divisibility chain enforced).  No transformation
/// certificates, no pivot heuristics beyond "first nonzero".
pub fn naive_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut factors: Vec<BigInt> = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // Find any nonzero entry in the remaining block.
        let mut pivot = None;
        'outer: for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            // Clear column t by repeated remainder steps.
            let mut again = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        again = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for i in t..rows {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        // Fold any entry not divisible by the pivot into its row.
        let mut fixed = false;
        'fix: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for jj in t..cols {
                        let add = a[i][jj].clone();
                        a[t][jj] += add;
                    }
                    fixed = true;
                    break 'fix;
                }
            }
        }
        if fixed {
            continue; // redo this pivot position
        }
        factors.push(a[t][t].abs());
        t += 1;
    }
    factors
}

pub fn naive_rank(a: Vec<Vec<BigInt>>) -> usize {
    naive_invariant_factors(a).len()
}

/// Naive bigraded integral homology of a tangle complex: for each bigrading,
/// dense incoming/outgoing differential blocks, then
/// free rank = dim − rank(out) − rank(in) and torsion = invariant factors > 1
/// of the incoming block (valid because kernels of integer matrices are
/// saturated subgroups).
pub fn naive_homology(cpx: &TangleComplex) -> BTreeMap<(i64, i64), (usize, Vec<BigInt>)> {
    let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for i in 0..cpx.rank() {
        buckets
            .entry((cpx.h_of(i), cpx.q_of(i)))
            .or_default()
            .push(i);
    }
    let pos: BTreeMap<usize, usize> = buckets
        .values()
        .flat_map(|v| v.iter().enumerate().map(|(k, &i)| (i, k)))
        .collect();
    // Dense block of the differential from bucket `src` into degree (h-1, q).
    let block = |src: &[usize], tgt_len: usize| -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); src.len()]; tgt_len];
        for (col, &i) in src.iter().enumerate() {
            for &(j, c) in cpx.differential(i) {
                m[pos[&j]][col] += BigInt::from(c);
            }
        }
        m
    };
    let mut out = BTreeMap::new();
    for (&(h, q), gens) in &buckets {
        let dim = gens.len();
        let below = buckets.get(&(h - 1, q)).map_or(0, Vec::len);
        let rank_out = naive_rank(block(gens, below));
        let (rank_in, torsion) = match buckets.get(&(h + 1, q)) {
            Some(above) => {
                let f = naive_invariant_factors(block(above, dim));
                let t: Vec<BigInt> = f
                    .iter()
                    .filter(|d| d.abs() > BigInt::from(1))
                    .cloned()
                    .collect();
                (f.len(), t)
            }
            None => (0, vec![]),
        };
        let free = dim - rank_out - rank_in;
        if free > 0 || !torsion.is_empty() {
            out.insert((h, q), (free, torsion));
        }
    }
    out
}

/// Library homology flattened to the oracle's shape for comparison.
pub fn library_homology(cpx: &TangleComplex) -> BTreeMap<(i64, i64), (usize, Vec<BigInt>)> {
    khtangle::homology::khovanov_homology(cpx)
        .unwrap()
        .groups
        .into_iter()
        .map(|(k, g)| (k, (g.free_rank, g.torsion)))
        .collect()
}

struct Dsu(Vec<usize>);
impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        self.0[rx] = ry;
    }
}

/// Circles of the (a, b)-closure of resolution `v`, counted with union-find on
/// the diagram's edges: resolution 0 joins crossing slots 0-1 and 2-3,
/// resolution 1 joins 0-3 and 1-2; closure arcs join boundary edges.
pub fn union_find_circles(
    t: &TangleDiagram,
    v: u32,
    a: &CrossinglessMatching,
    b: &CrossinglessMatching,
) -> usize {
    let mut dsu = Dsu::new(t.num_edges());
    for (c, cr) in t.crossings().iter().enumerate() {
        if v >> c & 1 == 0 {
            dsu.union(cr[0], cr[1]);
            dsu.union(cr[2], cr[3]);
        } else {
            dsu.union(cr[0], cr[3]);
            dsu.union(cr[1], cr[2]);
        }
    }
    for &(p, q) in a.pairs() {
        dsu.union(t.left_boundary()[p - 1], t.left_boundary()[q - 1]);
    }
    for &(p, q) in b.pairs() {
        dsu.union(t.right_boundary()[p - 1], t.right_boundary()[q - 1]);
    }
    let mut roots: Vec<usize> = (0..t.num_edges()).map(|e| dsu.find(e)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Graded Euler characteristic per q from raw generator counts.
pub fn euler_from_generators(cpx: &TangleComplex) -> BTreeMap<i64, i64> {
    let mut chi: BTreeMap<i64, i64> = BTreeMap::new();
    for i in 0..cpx.rank() {
        let s = if cpx.h_of(i).rem_euclid(2) == 0 { 1 } else { -1 };
        *chi.entry(cpx.q_of(i)).or_insert(0) += s;
    }
    chi.retain(|_, c| *c != 0);
    chi
}

/// Graded Euler characteristic per q from homology ranks (torsion drops out).
pub fn euler_from_homology(groups: &BTreeMap<(i64, i64), (usize, Vec<BigInt>)>) -> BTreeMap<i64, i64> {
    let mut chi: BTreeMap<i64, i64> = BTreeMap::new();
    for (&(h, q), &(free, _)) in groups {
        let s = if h.rem_euclid(2) == 0 { 1 } else { -1 };
        *chi.entry(q).or_insert(0) += s * free as i64;
    }
    chi.retain(|_, c| *c != 0);
    chi
}
