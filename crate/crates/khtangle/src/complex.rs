//! The Khovanov complex of an even tangle diagram, as a complex of
//! (H^m, H^n)-bimodules.
//!
//! A generator is a quadruple (a, b, v, x): crossingless matchings closing
//! the two boundaries, a resolution v of the crossings, and a labeling x of
//! the circles of the closed-off resolution.  The differential toggles one
//! 0-smoothing to a 1-smoothing and applies the saddle map of V, with the
//! usual alternating sign.  Gradings:
//!
//! * homological:  h = N₋ − |v|
//! * quantum:      q = gr(x) + n − |v| − N₊ + 2N₋
//!
//! where gr labels 1 ↦ −1, X ↦ +1 and 2n is the number of right boundary
//! points.  The writhe shift is recorded separately so the stable (unshifted)
//! data can be reported as well.

use crate::arc_algebra::ArcAlgebra;
use crate::curves::{closure_config, closure_left_ports, closure_right_ports, collapse_join,
                    match_circles, CurveDiagram};
use crate::diagram::TangleDiagram;
use crate::error::{KhError, Result};
use crate::frobenius::{apply_surgery, bit, label_grade};
use crate::matching::{enumerate_matchings, CrossinglessMatching};
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Generator {
    pub a: usize,
    pub b: usize,
    pub v: u32,
    pub label: u64,
}

pub struct TangleComplex {
    diagram: TangleDiagram,
    left_matchings: Vec<CrossinglessMatching>,
    right_matchings: Vec<CrossinglessMatching>,
    n_plus: usize,
    n_minus: usize,
    gens: Vec<Generator>,
    offsets: HashMap<(usize, usize, u32), usize>,
    circle_counts: HashMap<(usize, usize, u32), usize>,
    configs: HashMap<(usize, usize, u32), CurveDiagram>,
    diff: Vec<Vec<(usize, i64)>>,
}

pub fn resolutions(nc: usize) -> Vec<u32> {
    (0..1u32 << nc).collect()
}

pub fn v_vec(v: u32, nc: usize) -> Vec<u8> {
    (0..nc).map(|c| ((v >> c) & 1) as u8).collect()
}

/// Sign of the cube edge at crossing `c` from vertex `v`:
/// (−1)^(number of 1-coordinates below c).
pub fn edge_sign(v: u32, c: usize) -> i64 {
    let below = v & ((1u32 << c) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

impl TangleComplex {
    pub fn new(diagram: &TangleDiagram) -> Result<TangleComplex> {
        let nc = diagram.num_crossings();
        if nc > 20 {
            return Err(KhError::InvalidDiagram(format!(
                "diagram has {nc} crossings; the cube would be too large"
            )));
        }
        let left_matchings = enumerate_matchings(diagram.m());
        let right_matchings = enumerate_matchings(diagram.n());
        let (n_plus, n_minus) = diagram.writhe_counts();
        let mut gens = Vec::new();
        let mut offsets = HashMap::new();
        let mut circle_counts = HashMap::new();
        let mut configs = HashMap::new();
        for (ai, a) in left_matchings.iter().enumerate() {
            for (bi, b) in right_matchings.iter().enumerate() {
                for v in resolutions(nc) {
                    let cfg = closure_config(diagram, &v_vec(v, nc), a, b)?;
                    let k = cfg.circles().len();
                    if k >= 60 {
                        return Err(KhError::InvalidDiagram(format!(
                            "resolution has {k} circles"
                        )));
                    }
                    offsets.insert((ai, bi, v), gens.len());
                    circle_counts.insert((ai, bi, v), k);
                    for label in 0..(1u64 << k) {
                        gens.push(Generator {
                            a: ai,
                            b: bi,
                            v,
                            label,
                        });
                    }
                    configs.insert((ai, bi, v), cfg);
                }
            }
        }
        let mut cpx = TangleComplex {
            diagram: diagram.clone(),
            left_matchings,
            right_matchings,
            n_plus,
            n_minus,
            gens,
            offsets,
            circle_counts,
            configs,
            diff: Vec::new(),
        };
        cpx.build_differential()?;
        Ok(cpx)
    }

    fn build_differential(&mut self) -> Result<()> {
        let nc = self.diagram.num_crossings();
        let mut diff: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.gens.len()];
        for (&(ai, bi, v), cfg) in &self.configs {
            for c in 0..nc {
                if (v >> c) & 1 == 1 {
                    continue;
                }
                let s = cfg.surgery(c)?;
                let w = v | (1u32 << c);
                let sign = edge_sign(v, c);
                let src_off = self.offsets[&(ai, bi, v)];
                let dst_off = self.offsets[&(ai, bi, w)];
                let k = self.circle_counts[&(ai, bi, v)];
                for label in 0..(1u64 << k) {
                    for out in apply_surgery(label, &s) {
                        diff[src_off + label as usize].push((dst_off + out as usize, sign));
                    }
                }
            }
        }
        for row in &mut diff {
            row.sort();
        }
        self.diff = diff;
        Ok(())
    }

    pub fn diagram(&self) -> &TangleDiagram {
        &self.diagram
    }
    pub fn rank(&self) -> usize {
        self.gens.len()
    }
    pub fn generator(&self, i: usize) -> Generator {
        self.gens[i]
    }
    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }
    pub fn left_matchings(&self) -> &[CrossinglessMatching] {
        &self.left_matchings
    }
    pub fn right_matchings(&self) -> &[CrossinglessMatching] {
        &self.right_matchings
    }
    pub fn writhe_counts(&self) -> (usize, usize) {
        (self.n_plus, self.n_minus)
    }
    pub fn config(&self, a: usize, b: usize, v: u32) -> &CurveDiagram {
        &self.configs[&(a, b, v)]
    }
    pub fn circle_count(&self, a: usize, b: usize, v: u32) -> usize {
        self.circle_counts[&(a, b, v)]
    }
    pub fn index_of(&self, g: Generator) -> usize {
        self.offsets[&(g.a, g.b, g.v)] + g.label as usize
    }
    pub fn differential(&self, i: usize) -> &[(usize, i64)] {
        &self.diff[i]
    }

    /// Homological grading.
    pub fn h_of(&self, i: usize) -> i64 {
        self.n_minus as i64 - self.gens[i].v.count_ones() as i64
    }

    /// Quantum grading including the writhe shift.
    pub fn q_of(&self, i: usize) -> i64 {
        self.q_internal(i) - self.n_plus as i64 + 2 * self.n_minus as i64
    }

    /// Quantum grading without the writhe shift (the stable data is shifted
    /// by N₊).
    pub fn q_internal(&self, i: usize) -> i64 {
        let g = self.gens[i];
        let k = self.circle_counts[&(g.a, g.b, g.v)];
        label_grade(g.label, k) + self.diagram.n() as i64 - g.v.count_ones() as i64
    }

    /// Check d² = 0 and that the differential lowers h by one and preserves q.
    pub fn verify(&self) -> Result<()> {
        for i in 0..self.rank() {
            for &(j, _) in &self.diff[i] {
                if self.h_of(j) != self.h_of(i) - 1 {
                    return Err(KhError::Verification(format!(
                        "differential does not lower h at {i} -> {j}"
                    )));
                }
                if self.q_of(j) != self.q_of(i) {
                    return Err(KhError::Verification(format!(
                        "differential changes q at {i} -> {j}: {} vs {}",
                        self.q_of(i),
                        self.q_of(j)
                    )));
                }
            }
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(j, s1) in &self.diff[i] {
                for &(k, s2) in &self.diff[j] {
                    *acc.entry(k).or_insert(0) += s1 * s2;
                }
            }
            if acc.values().any(|&c| c != 0) {
                return Err(KhError::Verification(format!("d² ≠ 0 at generator {i}")));
            }
        }
        Ok(())
    }

    fn collapse_action(
        &self,
        start_cfg: &CurveDiagram,
        cj: crate::curves::CollapseJoin,
        start_label: u64,
        middle: &CrossinglessMatching,
        target: &CurveDiagram,
        target_offset: usize,
    ) -> Result<Vec<(usize, i64)>> {
        let _ = start_cfg;
        let mut cur: HashMap<u64, i64> = HashMap::from([(start_label, 1)]);
        let mut cfg = cj.joined;
        for &pair in &middle.innermost_first() {
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
        let to_target = match_circles(&cfg, target)?;
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (&label, &coeff) in &cur {
            let mut t = 0u64;
            for (ci, &tc) in to_target.iter().enumerate() {
                if bit(label, ci) {
                    t |= 1u64 << tc;
                }
            }
            *acc.entry(target_offset + t as usize).or_insert(0) += coeff;
        }
        let mut res: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        res.sort();
        Ok(res)
    }

    /// Right action of H^n: (a,b,v,x) · (b,c,y) landing in (a,c,v,·).
    pub fn right_action(&self, i: usize, h: &ArcAlgebra, j: usize) -> Result<Vec<(usize, i64)>> {
        if h.n() != self.diagram.n() {
            return Err(KhError::BoundaryMismatch(
                "right algebra does not fit the right boundary".into(),
            ));
        }
        let g = self.gens[i];
        let y = h.element(j);
        if y.a != g.b {
            return Ok(vec![]);
        }
        let b = &self.right_matchings[g.b];
        let module_cfg = &self.configs[&(g.a, g.b, g.v)];
        let alg_cfg = h.config(y.a, y.c);
        let ports_mod = closure_right_ports(&self.diagram);
        let ports_alg: Vec<usize> = (0..2 * h.n()).collect();
        let cj = collapse_join(module_cfg, &ports_mod, alg_cfg, &ports_alg, b, 0)?;
        let mut start = 0u64;
        for (mc, &jc) in cj.l_circles.iter().enumerate() {
            if bit(g.label, mc) {
                start |= 1u64 << jc;
            }
        }
        for (ac, &jc) in cj.r_circles.iter().enumerate() {
            if bit(y.label, ac) {
                start |= 1u64 << jc;
            }
        }
        let target = &self.configs[&(g.a, y.c, g.v)];
        let target_offset = self.offsets[&(g.a, y.c, g.v)];
        self.collapse_action(module_cfg, cj, start, b, target, target_offset)
    }

    /// Left action of H^m: (a1,a2,y) · (a2,b,v,x) landing in (a1,b,v,·).
    pub fn left_action(&self, h: &ArcAlgebra, j: usize, i: usize) -> Result<Vec<(usize, i64)>> {
        if h.n() != self.diagram.m() {
            return Err(KhError::BoundaryMismatch(
                "left algebra does not fit the left boundary".into(),
            ));
        }
        let g = self.gens[i];
        let y = h.element(j);
        if y.c != g.a {
            return Ok(vec![]);
        }
        let a2 = &self.left_matchings[g.a];
        let module_cfg = &self.configs[&(g.a, g.b, g.v)];
        let alg_cfg = h.config(y.a, y.c);
        let ports_mod = closure_left_ports(&self.diagram);
        let ports_alg: Vec<usize> = (0..2 * h.n()).collect();
        let cj = collapse_join(alg_cfg, &ports_alg, module_cfg, &ports_mod, a2, 0)?;
        let mut start = 0u64;
        for (ac, &jc) in cj.l_circles.iter().enumerate() {
            if bit(y.label, ac) {
                start |= 1u64 << jc;
            }
        }
        for (mc, &jc) in cj.r_circles.iter().enumerate() {
            if bit(g.label, mc) {
                start |= 1u64 << jc;
            }
        }
        let target = &self.configs[&(y.a, g.b, g.v)];
        let target_offset = self.offsets[&(y.a, g.b, g.v)];
        self.collapse_action(module_cfg, cj, start, a2, target, target_offset)
    }

    /// Bimodule checks against the two boundary algebras: units act as the
    /// identity, the actions commute with the differential and with each
    /// other, and the right action is compatible with the algebra product.
    pub fn verify_bimodule(&self, hl: &ArcAlgebra, hr: &ArcAlgebra) -> Result<()> {
        let add = |acc: &mut HashMap<usize, i64>, terms: &[(usize, i64)], scale: i64| {
            for &(k, c) in terms {
                *acc.entry(k).or_insert(0) += scale * c;
            }
        };
        let is_zero = |acc: &HashMap<usize, i64>| acc.values().all(|&c| c == 0);
        for i in 0..self.rank() {
            // Units.
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (j, c) in hr.unit() {
                add(&mut acc, &self.right_action(i, hr, j)?, c);
            }
            *acc.entry(i).or_insert(0) -= 1;
            if !is_zero(&acc) {
                return Err(KhError::Verification(format!(
                    "right unit fails on generator {i}"
                )));
            }
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (j, c) in hl.unit() {
                add(&mut acc, &self.left_action(hl, j, i)?, c);
            }
            *acc.entry(i).or_insert(0) -= 1;
            if !is_zero(&acc) {
                return Err(KhError::Verification(format!(
                    "left unit fails on generator {i}"
                )));
            }
        }
        // Differential commutes with both actions, and the two actions
        // commute with each other; the right action is associative over the
        // algebra product.
        for i in 0..self.rank() {
            for j in 0..hr.rank() {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(k, c) in &self.diff[i] {
                    add(&mut acc, &self.right_action(k, hr, j)?, c);
                }
                for &(k, c) in &self.right_action(i, hr, j)?.clone() {
                    add(&mut acc, &self.diff[k].iter().copied().collect::<Vec<_>>(), -c);
                }
                if !is_zero(&acc) {
                    return Err(KhError::Verification(format!(
                        "right action does not commute with d at ({i},{j})"
                    )));
                }
                for j2 in 0..hr.rank() {
                    let mut acc: HashMap<usize, i64> = HashMap::new();
                    for &(k, c) in &self.right_action(i, hr, j)?.clone() {
                        add(&mut acc, &self.right_action(k, hr, j2)?, c);
                    }
                    for (p, c) in hr.product(j, j2)? {
                        add(&mut acc, &self.right_action(i, hr, p)?, -c);
                    }
                    if !is_zero(&acc) {
                        return Err(KhError::Verification(format!(
                            "right action not associative at ({i},{j},{j2})"
                        )));
                    }
                }
            }
            for j in 0..hl.rank() {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(k, c) in &self.diff[i] {
                    add(&mut acc, &self.left_action(hl, j, k)?, c);
                }
                for &(k, c) in &self.left_action(hl, j, i)?.clone() {
                    add(&mut acc, &self.diff[k].iter().copied().collect::<Vec<_>>(), -c);
                }
                if !is_zero(&acc) {
                    return Err(KhError::Verification(format!(
                        "left action does not commute with d at ({i},{j})"
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
    use crate::corpus;

    #[test]
    fn unknot_complexes() {
        for (name, t) in corpus::unknot_diagrams() {
            let cpx = TangleComplex::new(&t).unwrap();
            cpx.verify().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn d_squared_zero_on_corpus() {
        for (name, t) in corpus::standard_corpus() {
            if t.num_crossings() > 4 {
                continue;
            }
            let cpx = TangleComplex::new(&t).unwrap();
            cpx.verify().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn trefoil_complex_ranks() {
        let t = corpus::closed_braid(2, &[(1, true), (1, true), (1, true)]).unwrap();
        let cpx = TangleComplex::new(&t).unwrap();
        // Circle counts per vertex: 2,1,1,1,2,2,2,3 over the cube.
        let total: usize = (0..8u32)
            .map(|v| 1usize << cpx.circle_count(0, 0, v))
            .sum();
        assert_eq!(cpx.rank(), total);
        cpx.verify().unwrap();
    }

    #[test]
    fn sec63_bimodule() {
        let t = corpus::sec63_tangle();
        let cpx = TangleComplex::new(&t).unwrap();
        assert_eq!(cpx.rank(), 12);
        cpx.verify().unwrap();
        let hl = ArcAlgebra::new(0).unwrap();
        let hr = ArcAlgebra::new(2).unwrap();
        cpx.verify_bimodule(&hl, &hr).unwrap();
    }

    #[test]
    fn t22_bimodule() {
        let t = corpus::braid_tangle(2, &[(1, true)]).unwrap();
        let cpx = TangleComplex::new(&t).unwrap();
        cpx.verify().unwrap();
        let h1 = ArcAlgebra::new(1).unwrap();
        cpx.verify_bimodule(&h1, &h1).unwrap();
    }
}
