//! Crossingless matchings of `2n` boundary points.
//!
//! Points are numbered `1..=2n` bottom-to-top along one vertical side of the
//! square.  A matching is a non-crossing perfect pairing; there are Catalan(n)
//! of them.  The canonical enumeration order is lexicographic on the sorted
//! pair list, so every downstream basis is reproducible.

use crate::error::{KhError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CrossinglessMatching {
    n: usize,
    /// Sorted list of pairs `(p, q)` with `p < q`, covering `{1, …, 2n}`.
    pairs: Vec<(usize, usize)>,
}

impl CrossinglessMatching {
    pub fn new(n: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort();
        let m = Self { n, pairs };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = vec![false; 2 * self.n + 1];
        if self.pairs.len() != self.n {
            return Err(KhError::InvalidDiagram(format!(
                "matching on {} points must have {} pairs, got {}",
                2 * self.n,
                self.n,
                self.pairs.len()
            )));
        }
        for &(p, q) in &self.pairs {
            if p == 0 || q > 2 * self.n || p == q {
                return Err(KhError::InvalidDiagram(format!(
                    "pair ({p},{q}) out of range for 2n={}",
                    2 * self.n
                )));
            }
            for x in [p, q] {
                if seen[x] {
                    return Err(KhError::InvalidDiagram(format!("point {x} matched twice")));
                }
                seen[x] = true;
            }
        }
        for (&(i, j), &(k, l)) in itertools::Itertools::tuple_combinations(self.pairs.iter()) {
            // pairs are sorted so i < k; crossing means i < k < j < l
            if k < j && j < l {
                return Err(KhError::InvalidDiagram(format!(
                    "pairs ({i},{j}) and ({k},{l}) cross"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Partner of point `p`.
    pub fn partner(&self, p: usize) -> usize {
        for &(a, b) in &self.pairs {
            if a == p {
                return b;
            }
            if b == p {
                return a;
            }
        }
        panic!("point {p} not in matching");
    }

    /// Index of the pair containing point `p`.
    pub fn pair_index(&self, p: usize) -> usize {
        self.pairs
            .iter()
            .position(|&(a, b)| a == p || b == p)
            .expect("point not in matching")
    }

    /// Nesting depth of pair `i`: the number of pairs strictly enclosing it.
    pub fn depth(&self, i: usize) -> usize {
        let (p, q) = self.pairs[i];
        self.pairs
            .iter()
            .filter(|&&(a, b)| a < p && q < b)
            .count()
    }

    /// Pair indices ordered innermost-first (deepest nesting first, then by
    /// lower endpoint).  This is the default surgery order for collapsing
    /// `b̄b`.
    pub fn innermost_first(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by_key(|&i| (std::cmp::Reverse(self.depth(i)), self.pairs[i].0));
        idx
    }

    /// An alternative valid surgery order (by lower endpoint), used by the
    /// order-independence checks.
    pub fn by_lower_endpoint(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by_key(|&i| self.pairs[i].0);
        idx
    }
}

impl std::fmt::Display for CrossinglessMatching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, &(p, q)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({p},{q})")?;
        }
        write!(f, "}}")
    }
}

/// All crossingless matchings of `2n` points, in lexicographic order on the
/// sorted pair lists.  The count is the Catalan number C_n.
pub fn enumerate_matchings(n: usize) -> Vec<CrossinglessMatching> {
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    let mut used = vec![false; 2 * n + 1];
    gen(n, &mut used, &mut pairs, &mut out);
    out.sort();
    out
}

fn gen(
    n: usize,
    used: &mut Vec<bool>,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<CrossinglessMatching>,
) {
    let first = (1..=2 * n).find(|&p| !used[p]);
    let Some(p) = first else {
        out.push(CrossinglessMatching {
            n,
            pairs: {
                let mut ps = pairs.clone();
                ps.sort();
                ps
            },
        });
        return;
    };
    used[p] = true;
    // (p,q) must leave an even number of unused points strictly between its
    // endpoints and must not cross an existing pair (exactly one endpoint of
    // the other pair strictly inside (p,q)).
    for q in (p + 1)..=(2 * n) {
        if used[q] {
            continue;
        }
        let between = ((p + 1)..q).filter(|&r| !used[r]).count();
        let crosses = pairs
            .iter()
            .any(|&(a, b)| (p < a && a < q) != (p < b && b < q));
        if between % 2 == 0 && !crosses {
            used[q] = true;
            pairs.push((p, q));
            gen(n, used, pairs, out);
            pairs.pop();
            used[q] = false;
        }
    }
    used[p] = false;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(n: usize) -> usize {
        let mut c = vec![0usize; n + 1];
        c[0] = 1;
        for i in 1..=n {
            for j in 0..i {
                c[i] += c[j] * c[i - 1 - j];
            }
        }
        c[n]
    }

    #[test]
    fn counts_are_catalan() {
        for n in 0..=8 {
            assert_eq!(enumerate_matchings(n).len(), catalan(n), "n={n}");
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(enumerate_matchings(1).len(), 1);
        assert_eq!(enumerate_matchings(1)[0].pairs(), &[(1, 2)]);
        let m2 = enumerate_matchings(2);
        assert_eq!(m2.len(), 2);
        assert_eq!(m2[0].pairs(), &[(1, 2), (3, 4)]);
        assert_eq!(m2[1].pairs(), &[(1, 4), (2, 3)]);
        assert_eq!(enumerate_matchings(3).len(), 5);
    }

    #[test]
    fn all_valid_and_sorted() {
        for n in 0..=5 {
            let ms = enumerate_matchings(n);
            for m in &ms {
                m.validate().unwrap();
            }
            let mut sorted = ms.clone();
            sorted.sort();
            assert_eq!(ms, sorted);
            sorted.dedup();
            assert_eq!(ms.len(), sorted.len());
        }
    }

    #[test]
    fn crossing_rejected() {
        assert!(CrossinglessMatching::new(2, vec![(1, 3), (2, 4)]).is_err());
        assert!(CrossinglessMatching::new(2, vec![(1, 2), (2, 4)]).is_err());
        assert!(CrossinglessMatching::new(2, vec![(1, 2)]).is_err());
    }

    #[test]
    fn innermost_order() {
        let m = CrossinglessMatching::new(3, vec![(1, 6), (2, 5), (3, 4)]).unwrap();
        assert_eq!(m.innermost_first(), vec![2, 1, 0]);
        let m = CrossinglessMatching::new(2, vec![(1, 2), (3, 4)]).unwrap();
        assert_eq!(m.innermost_first(), vec![0, 1]);
    }
}
