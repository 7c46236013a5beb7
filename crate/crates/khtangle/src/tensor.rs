//! Tensor product of tangle complexes over the arc algebra, and the gluing
//! map onto the complex of the composite tangle.
//!
//! For T₁ a (2m, 2n)-tangle and T₂ a (2n, 2l)-tangle, the tensor complex has
//! one free generator x⊗y per pair of generators with matching middle
//! matching, subject to the bilinearity relations (x·h)⊗y − x⊗(h·y) over
//! H^n, with differential d(x⊗y) = dx⊗y + (−1)^{|v(x)|} x⊗dy.
//!
//! The gluing map sends x⊗y to the result of collapsing the doubled middle
//! matching inside the glued closure picture; it is a chain map, it is
//! surjective onto the complex of T₁T₂, and its kernel is generated by the
//! bilinearity relations — so it presents the isomorphism
//! C(T₁) ⊗_{H^n} C(T₂) ≅ C(T₁T₂).

use crate::arc_algebra::ArcAlgebra;
use crate::complex::{Generator, TangleComplex};
use crate::curves::{closure_left_ports, closure_right_ports, collapse_join, match_circles};
use crate::diagram::{compose_tangles, TangleDiagram};
use crate::error::{KhError, Result};
use crate::frobenius::{apply_surgery, bit};
use crate::homology::{BigradedHomology, PresentedComplex, Sparse};
use crate::snf::{dims, kernel_basis, solve, zeros};
use num_bigint::BigInt;
use std::collections::HashMap;

pub struct TensorComplex<'a> {
    pub c1: &'a TangleComplex,
    pub c2: &'a TangleComplex,
    /// Pairs (i, j) of generator indices with c1.gen(i).b == c2.gen(j).a.
    pub pairs: Vec<(usize, usize)>,
    pub pair_index: HashMap<(usize, usize), usize>,
    pub relations: Vec<Sparse>,
    pub presented: PresentedComplex,
}

pub fn tensor_complex<'a>(
    c1: &'a TangleComplex,
    c2: &'a TangleComplex,
    middle: &ArcAlgebra,
) -> Result<TensorComplex<'a>> {
    if c1.diagram().n() != c2.diagram().m() || middle.n() != c1.diagram().n() {
        return Err(KhError::BoundaryMismatch(
            "tensor factors do not share a boundary".into(),
        ));
    }
    let mut pairs = Vec::new();
    let mut pair_index = HashMap::new();
    for i in 0..c1.rank() {
        for j in 0..c2.rank() {
            if c1.generator(i).b == c2.generator(j).a {
                pair_index.insert((i, j), pairs.len());
                pairs.push((i, j));
            }
        }
    }
    let grading: Vec<(i64, i64)> = pairs
        .iter()
        .map(|&(i, j)| (c1.h_of(i) + c2.h_of(j), c1.q_of(i) + c2.q_of(j)))
        .collect();
    let mut diff: Vec<Sparse> = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let mut row: Sparse = Vec::new();
        for &(i2, c) in c1.differential(i) {
            if let Some(&p) = pair_index.get(&(i2, j)) {
                row.push((p, c));
            }
        }
        let sign = if c1.generator(i).v.count_ones() % 2 == 0 {
            1
        } else {
            -1
        };
        for &(j2, c) in c2.differential(j) {
            if let Some(&p) = pair_index.get(&(i, j2)) {
                row.push((p, sign * c));
            }
        }
        row.sort();
        diff.push(row);
    }
    // Bilinearity relations (x·h)⊗y − x⊗(h·y).
    let mut relations: Vec<Sparse> = Vec::new();
    for i in 0..c1.rank() {
        for k in 0..middle.rank() {
            let e = middle.element(k);
            if c1.generator(i).b != e.a {
                continue;
            }
            let xh = c1.right_action(i, middle, k)?;
            for j in 0..c2.rank() {
                if c2.generator(j).a != e.c {
                    continue;
                }
                let hy = c2.left_action(middle, k, j)?;
                let mut col: HashMap<usize, i64> = HashMap::new();
                for &(i2, c) in &xh {
                    *col.entry(pair_index[&(i2, j)]).or_insert(0) += c;
                }
                for &(j2, c) in &hy {
                    *col.entry(pair_index[&(i, j2)]).or_insert(0) -= c;
                }
                let mut col: Sparse = col.into_iter().filter(|&(_, c)| c != 0).collect();
                if !col.is_empty() {
                    col.sort();
                    relations.push(col);
                }
            }
        }
    }
    let presented = PresentedComplex::new(grading, diff, relations.clone())?;
    Ok(TensorComplex {
        c1,
        c2,
        pairs,
        pair_index,
        relations,
        presented,
    })
}

/// The gluing chain map.  Returns, per tensor generator, its image in the
/// composite complex as a sparse combination (the middle collapse applies one
/// saddle per doubled arc, so both merges and splits can occur).
pub fn gluing_map(tensor: &TensorComplex, composite: &TangleComplex) -> Result<Vec<Sparse>> {
    let c1 = tensor.c1;
    let c2 = tensor.c2;
    let nc1 = c1.diagram().num_crossings();
    let ports1 = closure_right_ports(c1.diagram());
    let ports2 = closure_left_ports(c2.diagram());
    let mut out = Vec::with_capacity(tensor.pairs.len());
    // Cache joins per (a, b, v1, c, v2): label-independent.
    let mut cache: HashMap<(usize, usize, u32, usize, u32), (Vec<crate::curves::Surgery>, Vec<usize>, Vec<usize>, Vec<usize>)> =
        HashMap::new();
    for &(i, j) in &tensor.pairs {
        let x = c1.generator(i);
        let y = c2.generator(j);
        let b = &c1.right_matchings()[x.b];
        let key = (x.a, x.b, x.v, y.b, y.v);
        if !cache.contains_key(&key) {
            let cj = collapse_join(
                c1.config(x.a, x.b, x.v),
                &ports1,
                c2.config(y.a, y.b, y.v),
                &ports2,
                b,
                nc1,
            )?;
            let mut surgeries = Vec::new();
            let mut cfg = cj.joined;
            for &pair in &b.innermost_first() {
                let s = cfg.surgery(cj.first_site + pair)?;
                cfg = s.new.clone();
                surgeries.push(s);
            }
            let v = x.v | (y.v << nc1);
            let target = composite.config(x.a, y.b, v);
            let to_target = match_circles(&cfg, target)?;
            cache.insert(key, (surgeries, cj.l_circles, cj.r_circles, to_target));
        }
        let (surgeries, l_circles, r_circles, to_target) = &cache[&key];
        let mut label = 0u64;
        for (lc, &jc) in l_circles.iter().enumerate() {
            if bit(x.label, lc) {
                label |= 1u64 << jc;
            }
        }
        for (rc, &jc) in r_circles.iter().enumerate() {
            if bit(y.label, rc) {
                label |= 1u64 << jc;
            }
        }
        let mut labels: HashMap<u64, i64> = HashMap::from([(label, 1)]);
        for s in surgeries {
            let mut next: HashMap<u64, i64> = HashMap::new();
            for (&l, &c) in &labels {
                for l2 in apply_surgery(l, s) {
                    *next.entry(l2).or_insert(0) += c;
                }
            }
            labels = next;
        }
        let v = x.v | (y.v << nc1);
        let mut image: Sparse = labels
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(l, c)| {
                let mut t = 0u64;
                for (ci, &tc) in to_target.iter().enumerate() {
                    if bit(l, ci) {
                        t |= 1u64 << tc;
                    }
                }
                (
                    composite.index_of(Generator {
                        a: x.a,
                        b: y.b,
                        v,
                        label: t,
                    }),
                    c,
                )
            })
            .collect();
        image.sort();
        out.push(image);
    }
    Ok(out)
}

pub struct GluingReport {
    pub pairs: usize,
    pub relations: usize,
    pub composite_rank: usize,
    pub homology: BigradedHomology,
}

/// Full verification of the gluing isomorphism for one pair of tangles:
/// the gluing map is a chain map, surjective, its kernel is spanned by the
/// bilinearity relations, and the tensor homology equals the homology of the
/// composite.
pub fn verify_gluing(t1: &TangleDiagram, t2: &TangleDiagram) -> Result<GluingReport> {
    let (glued, _, _) = compose_tangles(t1, t2)?;
    let c1 = TangleComplex::new(t1)?;
    let c2 = TangleComplex::new(t2)?;
    let middle = ArcAlgebra::new(t1.n())?;
    let composite = TangleComplex::new(&glued)?;
    composite.verify()?;
    let tensor = tensor_complex(&c1, &c2, &middle)?;
    tensor.presented.verify()?;
    let g = gluing_map(&tensor, &composite)?;

    // Gluing may have to reverse the orientation of strands to make the two
    // boundaries fit, which can change crossing signs; the cube is untouched
    // but the writhe normalization shifts.  Compare up to that shift.
    let (p1, m1) = c1.writhe_counts();
    let (p2, m2) = c2.writhe_counts();
    let (pc, mc) = composite.writhe_counts();
    let dh = mc as i64 - (m1 + m2) as i64;
    let dq = (2 * mc as i64 - pc as i64) - (2 * (m1 + m2) as i64 - (p1 + p2) as i64);

    // Gradings are preserved (up to the shift) where the map is nonzero.
    for (p, &(i, j)) in tensor.pairs.iter().enumerate() {
        for &(t, _) in &g[p] {
            if composite.h_of(t) != c1.h_of(i) + c2.h_of(j) + dh
                || composite.q_of(t) != c1.q_of(i) + c2.q_of(j) + dq
            {
                return Err(KhError::Verification(
                    "gluing map does not preserve the bigrading".into(),
                ));
            }
        }
    }

    // Chain map: g(d_tensor) = d_composite(g) on every tensor generator.
    for p in 0..tensor.pairs.len() {
        let mut lhs: HashMap<usize, i64> = HashMap::new();
        for &(p2, c) in &tensor.presented_diff(p) {
            for &(t, c2) in &g[p2] {
                *lhs.entry(t).or_insert(0) += c * c2;
            }
        }
        for &(t, c) in &g[p] {
            for &(t2, c2) in composite.differential(t) {
                *lhs.entry(t2).or_insert(0) -= c * c2;
            }
        }
        if lhs.values().any(|&c| c != 0) {
            return Err(KhError::Verification(format!(
                "gluing is not a chain map at pair {p}"
            )));
        }
    }

    let n = tensor.pairs.len();
    let mut gmat = zeros(composite.rank(), n);
    for (p, terms) in g.iter().enumerate() {
        for &(t, c) in terms {
            gmat[t][p] += BigInt::from(c);
        }
    }

    // Surjectivity over Z: the cokernel of the gluing matrix is trivial.
    let s = crate::snf::smith_normal_form(&gmat);
    if s.rank != composite.rank()
        || !s.invariant_factors().iter().all(num_traits::One::is_one)
    {
        return Err(KhError::Verification("gluing map is not surjective".into()));
    }

    // Kernel of g is contained in the span of the relations.
    let kern = kernel_basis(&gmat);
    let mut rel_mat = zeros(n, tensor.relations.len());
    for (col, rel) in tensor.relations.iter().enumerate() {
        for &(p, c) in rel {
            rel_mat[p][col] += BigInt::from(c);
        }
    }
    if dims(&kern).1 > 0 && solve(&rel_mat, &kern).is_none() {
        return Err(KhError::Verification(
            "kernel of the gluing map is not generated by the relations".into(),
        ));
    }
    // And conversely the relations die under g (they are in the kernel).
    let prod = crate::snf::mat_mul(&gmat, &rel_mat);
    if prod.iter().any(|r| r.iter().any(|x| !num_traits::Zero::is_zero(x))) {
        return Err(KhError::Verification(
            "a bilinearity relation survives the gluing map".into(),
        ));
    }

    let h_tensor = tensor.presented.homology()?.shifted(dh, dq);
    let h_composite = crate::homology::khovanov_homology(&composite)?;
    if h_tensor != h_composite {
        return Err(KhError::Verification(format!(
            "tensor homology differs from composite homology:\n{h_tensor}\nvs\n{h_composite}"
        )));
    }
    Ok(GluingReport {
        pairs: n,
        relations: tensor.relations.len(),
        composite_rank: composite.rank(),
        homology: h_composite,
    })
}

impl<'a> TensorComplex<'a> {
    fn presented_diff(&self, p: usize) -> Sparse {
        let (i, j) = self.pairs[p];
        let mut row: Sparse = Vec::new();
        for &(i2, c) in self.c1.differential(i) {
            if let Some(&pp) = self.pair_index.get(&(i2, j)) {
                row.push((pp, c));
            }
        }
        let sign = if self.c1.generator(i).v.count_ones() % 2 == 0 {
            1
        } else {
            -1
        };
        for &(j2, c) in self.c2.differential(j) {
            if let Some(&pp) = self.pair_index.get(&(i, j2)) {
                row.push((pp, sign * c));
            }
        }
        row.sort();
        row
    }
}
