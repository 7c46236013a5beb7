//! The arc algebra H^n.
//!
//! Basis elements are triples (a, c, labeling): two crossingless matchings of
//! 2n points and a labeling of the circles of the closed diagram formed by
//! the reflection of `a` glued to `c`.  The product of (a,b,x) and (b,c,y)
//! collapses the doubled middle matching `b` by one saddle per arc; products
//! with mismatched middle matchings vanish.  The quantum grading of a basis
//! element is the sum of its circle gradings plus n.

use crate::curves::{collapse_join, match_circles, matching_pair_config, CurveDiagram};
use crate::error::{KhError, Result};
use crate::frobenius::{apply_surgery, bit, label_grade};
use crate::matching::{enumerate_matchings, CrossinglessMatching};
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AlgElt {
    pub a: usize,
    pub c: usize,
    pub label: u64,
}

pub struct ArcAlgebra {
    n: usize,
    matchings: Vec<CrossinglessMatching>,
    configs: Vec<Vec<CurveDiagram>>,
    circle_counts: Vec<Vec<usize>>,
    offsets: Vec<Vec<usize>>,
    total: usize,
    elements: Vec<AlgElt>,
}

impl ArcAlgebra {
    pub fn new(n: usize) -> Result<ArcAlgebra> {
        let matchings = enumerate_matchings(n);
        let k = matchings.len();
        let mut configs = Vec::with_capacity(k);
        let mut circle_counts = Vec::with_capacity(k);
        for a in &matchings {
            let mut row = Vec::with_capacity(k);
            let mut crow = Vec::with_capacity(k);
            for c in &matchings {
                let cfg = matching_pair_config(a, c);
                crow.push(cfg.circles().len());
                row.push(cfg);
            }
            configs.push(row);
            circle_counts.push(crow);
        }
        let mut offsets = vec![vec![0usize; k]; k];
        let mut total = 0usize;
        let mut elements = Vec::new();
        for a in 0..k {
            for c in 0..k {
                offsets[a][c] = total;
                let circles = circle_counts[a][c];
                if circles >= 60 {
                    return Err(KhError::InvalidDiagram(format!(
                        "too many circles ({circles}) in one closed diagram"
                    )));
                }
                for label in 0..(1u64 << circles) {
                    elements.push(AlgElt { a, c, label });
                }
                total += 1usize << circles;
            }
        }
        Ok(ArcAlgebra {
            n,
            matchings,
            configs,
            circle_counts,
            offsets,
            total,
            elements,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn num_matchings(&self) -> usize {
        self.matchings.len()
    }
    pub fn matchings(&self) -> &[CrossinglessMatching] {
        &self.matchings
    }
    pub fn rank(&self) -> usize {
        self.total
    }
    pub fn element(&self, i: usize) -> AlgElt {
        self.elements[i]
    }
    pub fn circles(&self, a: usize, c: usize) -> usize {
        self.circle_counts[a][c]
    }
    pub fn config(&self, a: usize, c: usize) -> &CurveDiagram {
        &self.configs[a][c]
    }
    pub fn index_of(&self, e: AlgElt) -> usize {
        self.offsets[e.a][e.c] + e.label as usize
    }

    /// Quantum grading.
    pub fn q_of(&self, i: usize) -> i64 {
        let e = self.elements[i];
        label_grade(e.label, self.circle_counts[e.a][e.c]) + self.n as i64
    }

    /// The idempotent of matching `a`: every circle labeled 1.
    pub fn idempotent(&self, a: usize) -> usize {
        self.offsets[a][a]
    }

    /// The unit: the sum of all idempotents.
    pub fn unit(&self) -> Vec<(usize, i64)> {
        (0..self.matchings.len())
            .map(|a| (self.idempotent(a), 1))
            .collect()
    }

    /// Product of basis elements, collapsing middle arcs innermost-first.
    pub fn product(&self, i: usize, j: usize) -> Result<Vec<(usize, i64)>> {
        let order = self.matchings[self.elements[i].c].innermost_first();
        self.product_with_order(i, j, &order)
    }

    /// Product with an explicit collapse order over the middle arcs (indices
    /// into the pair list of the shared matching).
    pub fn product_with_order(
        &self,
        i: usize,
        j: usize,
        order: &[usize],
    ) -> Result<Vec<(usize, i64)>> {
        let x = self.elements[i];
        let y = self.elements[j];
        if x.c != y.a {
            return Ok(vec![]);
        }
        let b = &self.matchings[x.c];
        let ports: Vec<usize> = (0..2 * self.n).collect();
        let cj = collapse_join(
            &self.configs[x.a][x.c],
            &ports,
            &self.configs[y.a][y.c],
            &ports,
            b,
            0,
        )?;
        let mut start = 0u64;
        for (lc, &jc) in cj.l_circles.iter().enumerate() {
            if bit(x.label, lc) {
                start |= 1u64 << jc;
            }
        }
        for (rc, &jc) in cj.r_circles.iter().enumerate() {
            if bit(y.label, rc) {
                start |= 1u64 << jc;
            }
        }
        let mut cur: HashMap<u64, i64> = HashMap::from([(start, 1)]);
        let mut cfg = cj.joined;
        for &pair in order {
            let s = cfg.surgery(cj.first_site + pair)?;
            let mut next: HashMap<u64, i64> = HashMap::new();
            for (&label, &coeff) in &cur {
                for out in apply_surgery(label, &s) {
                    *next.entry(out).or_insert(0) += coeff;
                }
            }
            cfg = s.new;
            cur = next;
        }
        let target = &self.configs[x.a][y.c];
        let to_target = match_circles(&cfg, target)?;
        let mut out: HashMap<u64, i64> = HashMap::new();
        for (&label, &coeff) in &cur {
            let mut t = 0u64;
            for (ci, &tc) in to_target.iter().enumerate() {
                if bit(label, ci) {
                    t |= 1u64 << tc;
                }
            }
            *out.entry(t).or_insert(0) += coeff;
        }
        let mut res: Vec<(usize, i64)> = out
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(label, c)| (self.offsets[x.a][y.c] + label as usize, c))
            .collect();
        res.sort();
        Ok(res)
    }

    /// Product of two linear combinations.
    pub fn product_lin(
        &self,
        xs: &[(usize, i64)],
        ys: &[(usize, i64)],
    ) -> Result<Vec<(usize, i64)>> {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(i, ci) in xs {
            for &(j, cjc) in ys {
                for (k, ck) in self.product(i, j)? {
                    *acc.entry(k).or_insert(0) += ci * cjc * ck;
                }
            }
        }
        let mut res: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        res.sort();
        Ok(res)
    }

    /// Structural verification: associativity on the whole basis, unitality,
    /// idempotent behaviour, grading additivity, and independence of the
    /// collapse order.
    pub fn verify(&self) -> Result<()> {
        let k = self.matchings.len();
        // Idempotents and unit.
        for i in 0..self.total {
            let e = self.elements[i];
            let lhs = self.product(self.idempotent(e.a), i)?;
            if lhs != vec![(i, 1)] {
                return Err(KhError::Verification(format!(
                    "left idempotent fails on element {i}: {lhs:?}"
                )));
            }
            let rhs = self.product(i, self.idempotent(e.c))?;
            if rhs != vec![(i, 1)] {
                return Err(KhError::Verification(format!(
                    "right idempotent fails on element {i}"
                )));
            }
            for other in 0..k {
                if other != e.a {
                    let z = self.product(self.idempotent(other), i)?;
                    if !z.is_empty() {
                        return Err(KhError::Verification(
                            "orthogonal idempotent acts nontrivially".into(),
                        ));
                    }
                }
            }
        }
        // Grading: every structure constant respects q(x) + q(y) = q(xy).
        for i in 0..self.total {
            for j in 0..self.total {
                for (t, _) in self.product(i, j)? {
                    if self.q_of(t) != self.q_of(i) + self.q_of(j) {
                        return Err(KhError::Verification(format!(
                            "grading violated in product {i}*{j} -> {t}"
                        )));
                    }
                }
            }
        }
        // Associativity.
        for i in 0..self.total {
            for j in 0..self.total {
                let ij = self.product(i, j)?;
                for l in 0..self.total {
                    let jl = self.product(j, l)?;
                    let lhs = self.product_lin(&ij, &[(l, 1)])?;
                    let rhs = self.product_lin(&[(i, 1)], &jl)?;
                    if lhs != rhs {
                        return Err(KhError::Verification(format!(
                            "associativity fails at ({i},{j},{l})"
                        )));
                    }
                }
            }
        }
        // Collapse-order independence: innermost-first vs by lower endpoint.
        for i in 0..self.total {
            for j in 0..self.total {
                let x = self.elements[i];
                let y = self.elements[j];
                if x.c != y.a {
                    continue;
                }
                let b = &self.matchings[x.c];
                let p1 = self.product_with_order(i, j, &b.innermost_first())?;
                let p2 = self.product_with_order(i, j, &b.by_lower_endpoint())?;
                if p1 != p2 {
                    return Err(KhError::Verification(format!(
                        "collapse order changes product {i}*{j}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        // Sum over pairs of matchings of 2^(circles of the glued diagram).
        assert_eq!(ArcAlgebra::new(0).unwrap().rank(), 1);
        assert_eq!(ArcAlgebra::new(1).unwrap().rank(), 2);
        assert_eq!(ArcAlgebra::new(2).unwrap().rank(), 12);
    }

    #[test]
    fn h1_is_dual_numbers_matrix() {
        // H^1 has one matching; the algebra is V itself: 1·X = X, X·X = 0.
        let h = ArcAlgebra::new(1).unwrap();
        let one = h.idempotent(0);
        let x = h.index_of(AlgElt { a: 0, c: 0, label: 1 });
        assert_eq!(h.product(one, x).unwrap(), vec![(x, 1)]);
        assert_eq!(h.product(x, x).unwrap(), vec![]);
        assert_eq!(h.q_of(one), 0);
        assert_eq!(h.q_of(x), 2);
    }

    #[test]
    fn verify_small() {
        for n in 0..=2 {
            ArcAlgebra::new(n).unwrap().verify().unwrap();
        }
    }

    #[test]
    fn q_bounds() {
        let h = ArcAlgebra::new(2).unwrap();
        for i in 0..h.rank() {
            let q = h.q_of(i);
            assert!((-2..=4).contains(&q), "q={q}");
        }
    }
}
