//! Integral bigraded homology of complexes of presented abelian groups.
//!
//! A `PresentedComplex` stores, for each bidegree (h, q), a finite generating
//! set together with relation columns; the chain groups are the cokernels of
//! the relations, and the differential drops h by one and preserves q.  The
//! homology at (h, q) is the subquotient
//!
//! ```text
//! { x : d·x ∈ im R } / (im d + im R),
//! ```
//!
//! computed exactly over the integers via Smith normal form.

use crate::complex::TangleComplex;
use crate::error::{KhError, Result};
use crate::snf::{column_span_basis, dims, mat_mul, smith_normal_form, solve, zeros, Mat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub type Sparse = Vec<(usize, i64)>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Torsion orders > 1, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BigradedHomology {
    /// Nontrivial groups by (h, q).
    pub groups: BTreeMap<(i64, i64), HomologyGroup>,
}

impl BigradedHomology {
    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank).sum()
    }
    pub fn total_torsion(&self) -> usize {
        self.groups.values().map(|g| g.torsion.len()).sum()
    }
    /// Free ranks and torsion orders with both gradings shifted.
    pub fn shifted(&self, dh: i64, dq: i64) -> BigradedHomology {
        BigradedHomology {
            groups: self
                .groups
                .iter()
                .map(|(&(h, q), g)| ((h + dh, q + dq), g.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for BigradedHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return writeln!(f, "(trivial)");
        }
        for (&(h, q), g) in &self.groups {
            writeln!(f, "h={h:>3} q={q:>3}: {g}")?;
        }
        Ok(())
    }
}

/// A complex of presented graded abelian groups.  Generators are globally
/// indexed; each lives in one bidegree.
pub struct PresentedComplex {
    grading: Vec<(i64, i64)>,
    diff: Vec<Sparse>,
    relations: Vec<Sparse>,
    /// (h, q) -> generator indices, in global order.
    buckets: BTreeMap<(i64, i64), Vec<usize>>,
}

impl PresentedComplex {
    pub fn new(grading: Vec<(i64, i64)>, diff: Vec<Sparse>, relations: Vec<Sparse>) -> Result<Self> {
        if diff.len() != grading.len() {
            return Err(KhError::Verification(
                "differential rows do not match generator count".into(),
            ));
        }
        let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (i, &hq) in grading.iter().enumerate() {
            buckets.entry(hq).or_default().push(i);
        }
        let cpx = PresentedComplex {
            grading,
            diff,
            relations,
            buckets,
        };
        cpx.check_gradings()?;
        Ok(cpx)
    }

    fn check_gradings(&self) -> Result<()> {
        for (i, row) in self.diff.iter().enumerate() {
            let (h, q) = self.grading[i];
            for &(j, _) in row {
                if self.grading[j] != (h - 1, q) {
                    return Err(KhError::Verification(format!(
                        "differential entry {i} -> {j} violates the bigrading"
                    )));
                }
            }
        }
        for rel in &self.relations {
            if let Some(&(j0, _)) = rel.first() {
                let hq = self.grading[j0];
                for &(j, _) in rel {
                    if self.grading[j] != hq {
                        return Err(KhError::Verification(
                            "inhomogeneous relation column".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn local_index(&self, hq: (i64, i64)) -> HashMap<usize, usize> {
        self.buckets
            .get(&hq)
            .map(|v| v.iter().enumerate().map(|(k, &g)| (g, k)).collect())
            .unwrap_or_default()
    }

    fn bucket_len(&self, hq: (i64, i64)) -> usize {
        self.buckets.get(&hq).map_or(0, |v| v.len())
    }

    /// Differential matrix from bidegree (h, q) to (h-1, q): rows indexed by
    /// the target bucket, columns by the source bucket.
    fn diff_matrix(&self, h: i64, q: i64) -> Mat {
        let src = self.buckets.get(&(h, q)).cloned().unwrap_or_default();
        let dst = self.local_index((h - 1, q));
        let mut m = zeros(dst.len(), src.len());
        for (col, &g) in src.iter().enumerate() {
            for &(j, c) in &self.diff[g] {
                m[dst[&j]][col] += BigInt::from(c);
            }
        }
        m
    }

    /// Relation columns living in bidegree (h, q).
    fn relation_matrix(&self, h: i64, q: i64) -> Mat {
        let idx = self.local_index((h, q));
        let n = self.bucket_len((h, q));
        let cols: Vec<&Sparse> = self
            .relations
            .iter()
            .filter(|rel| rel.first().map_or(false, |&(j, _)| self.grading[j] == (h, q)))
            .collect();
        let mut m = zeros(n, cols.len());
        for (col, rel) in cols.iter().enumerate() {
            for &(j, c) in rel.iter() {
                m[idx[&j]][col] += BigInt::from(c);
            }
        }
        m
    }

    /// d² must vanish into the cokernel of the relations, and d must carry
    /// relations to relations.
    pub fn verify(&self) -> Result<()> {
        let degrees: Vec<(i64, i64)> = self.buckets.keys().copied().collect();
        for &(h, q) in &degrees {
            // With an empty bucket one step down, both composites are
            // trivially zero.
            if self.bucket_len((h - 1, q)) == 0 {
                continue;
            }
            let d1 = self.diff_matrix(h, q);
            if self.bucket_len((h - 2, q)) > 0 {
                let d0 = self.diff_matrix(h - 1, q);
                let dd = mat_mul(&d0, &d1);
                let r2 = self.relation_matrix(h - 2, q);
                if !in_span(&r2, &dd)? {
                    return Err(KhError::Verification(format!(
                        "d² does not land in the relations at (h={h}, q={q})"
                    )));
                }
            }
            let r1 = self.relation_matrix(h, q);
            if dims(&r1).1 > 0 {
                let dr = mat_mul(&d1, &r1);
                let r0 = self.relation_matrix(h - 1, q);
                if !in_span(&r0, &dr)? {
                    return Err(KhError::Verification(format!(
                        "d does not preserve the relations at (h={h}, q={q})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn homology(&self) -> Result<BigradedHomology> {
        let mut out = BigradedHomology::default();
        let degrees: Vec<(i64, i64)> = self.buckets.keys().copied().collect();
        for &(h, q) in &degrees {
            let n = self.bucket_len((h, q));
            let r_here = self.relation_matrix(h, q);
            let d_next = self.diff_matrix(h + 1, q);
            // Generators of K = { x : d x ∈ im R }: kernel of [d | r_prev]
            // projected to the first block.  With nothing one step down the
            // differential vanishes and K is everything.
            let k_gens = if self.bucket_len((h - 1, q)) == 0 {
                crate::snf::identity(n)
            } else {
                let d = self.diff_matrix(h, q);
                let r_prev = self.relation_matrix(h - 1, q);
                let stacked = hcat(&d, &r_prev);
                let kern = crate::snf::kernel_basis(&stacked);
                let mut k_gens = zeros(n, dims(&kern).1);
                for j in 0..dims(&kern).1 {
                    for i in 0..n {
                        k_gens[i][j] = kern[i][j].clone();
                    }
                }
                k_gens
            };
            let basis = column_span_basis(&k_gens);
            let k_rank = dims(&basis).1;
            // The subgroup to quotient by: images of d and the relations.
            let l = hcat(&hcat(&d_next, &r_here), &zeros(n, 0));
            let group = if dims(&l).1 == 0 {
                HomologyGroup {
                    free_rank: k_rank,
                    torsion: vec![],
                }
            } else {
                let x = solve(&basis, &l).ok_or_else(|| {
                    KhError::Verification(format!(
                        "boundaries do not lie in the cycles at (h={h}, q={q})"
                    ))
                })?;
                let s = smith_normal_form(&x);
                let torsion: Vec<BigInt> = s
                    .invariant_factors()
                    .into_iter()
                    .filter(|f| !f.is_one())
                    .collect();
                HomologyGroup {
                    free_rank: k_rank - s.rank,
                    torsion,
                }
            };
            if !group.is_trivial() {
                out.groups.insert((h, q), group);
            }
        }
        Ok(out)
    }
}

fn hcat(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca) = dims(a);
    let (rb, cb) = dims(b);
    let rows = ra.max(rb);
    let mut out = zeros(rows, ca + cb);
    for i in 0..ra {
        for j in 0..ca {
            out[i][j] = a[i][j].clone();
        }
    }
    for i in 0..rb {
        for j in 0..cb {
            out[i][ca + j] = b[i][j].clone();
        }
    }
    out
}

/// Is every column of `b` in the integer column span of `a`?
fn in_span(a: &Mat, b: &Mat) -> Result<bool> {
    let (_, cb) = dims(b);
    if cb == 0 || b.iter().all(|r| r.iter().all(|x| x.is_zero())) {
        return Ok(true);
    }
    Ok(solve(a, b).is_some())
}

/// The homology of a tangle complex, with the writhe shift applied.
pub fn khovanov_homology(cpx: &TangleComplex) -> Result<BigradedHomology> {
    presented(cpx, None, true)?.homology()
}

/// The homology of the sub-complex at a fixed pair of closure matchings;
/// `shifted` selects whether the writhe shift is applied to q.
pub fn khovanov_homology_at(
    cpx: &TangleComplex,
    a: usize,
    b: usize,
    shifted: bool,
) -> Result<BigradedHomology> {
    presented(cpx, Some((a, b)), shifted)?.homology()
}

pub fn presented(
    cpx: &TangleComplex,
    at: Option<(usize, usize)>,
    shifted: bool,
) -> Result<PresentedComplex> {
    let keep: Vec<usize> = (0..cpx.rank())
        .filter(|&i| {
            let g = cpx.generator(i);
            at.map_or(true, |(a, b)| g.a == a && g.b == b)
        })
        .collect();
    let reindex: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let grading = keep
        .iter()
        .map(|&i| {
            (
                cpx.h_of(i),
                if shifted {
                    cpx.q_of(i)
                } else {
                    cpx.q_internal(i)
                },
            )
        })
        .collect();
    let diff = keep
        .iter()
        .map(|&i| {
            cpx.differential(i)
                .iter()
                .map(|&(j, c)| (reindex[&j], c))
                .collect()
        })
        .collect();
    PresentedComplex::new(grading, diff, vec![])
}
