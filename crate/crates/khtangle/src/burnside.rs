//! The cube of correspondences refining the Khovanov complex.
//!
//! Every saddle map of the complex has coefficients 0 or 1, so an edge of the
//! cube is a correspondence: the set of (source, target) generator pairs with
//! a nonzero matrix entry.  For each two-dimensional face the two composite
//! correspondences are identified by a canonical bijection of fibers.  Fibers
//! of size two occur exactly in the ladybug configuration — a circle split by
//! both surgeries, with the four surgery chords interleaved, so that either
//! order splits the circle and merges it back.  There the bijection pairs the
//! intermediate circles through the planar data of the configuration: list
//! the four chords in the counterclockwise cyclic order of the circle, and
//! pair the circle containing a chord of the higher-indexed site with the
//! circle containing that chord's counterclockwise successor when the
//! higher-indexed site's surgery arc lies inside the circle, and its
//! counterclockwise predecessor when it lies outside.  (The two interleaved
//! arcs always lie on opposite sides, so the rule is symmetric in the two
//! sites; its uniform mirror is equally coherent, and this orientation is a
//! fixed convention.)
//!
//! `check_all` verifies the face bijections, the hexagon coherence around
//! every three-dimensional face, and that the signed cardinalities reproduce
//! the differential.  The `Corrupted` rule flips the pairing on some faces
//! but not others; it still gives valid face bijections, yet the hexagons
//! detect it — a negative control for the coherence machinery.

use crate::complex::{edge_sign, TangleComplex};
use crate::curves::{Circles, StrandRef, Surgery, SurgeryKind};
use crate::error::{KhError, Result};
use crate::frobenius::{apply_surgery, bit};
use std::cell::RefCell;
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LadybugRule {
    Standard,
    /// Use the mirror pairing on faces whose lower crossing index is 0.
    /// A uniform mirror choice is coherent; a mixed one is not.
    Corrupted,
}

#[derive(Clone, Copy, Default, Debug)]
pub struct CoherenceReport {
    pub faces_checked: usize,
    pub ladybug_faces: usize,
    pub hexagons_checked: usize,
}

type Key = (usize, usize, u32);

pub struct BurnsideCube<'a> {
    cpx: &'a TangleComplex,
    rule: LadybugRule,
    circles: HashMap<Key, Circles>,
    surgeries: HashMap<(Key, usize), Surgery>,
    orientations: RefCell<HashMap<Key, Vec<bool>>>,
    // (key, ci, cj, x) -> z -> matched pairs (via ci, via cj).
    pairings: RefCell<HashMap<(Key, usize, usize, u64), HashMap<u64, Vec<(u64, u64)>>>>,
    ladybug_seen: RefCell<usize>,
}

impl<'a> BurnsideCube<'a> {
    pub fn new(cpx: &'a TangleComplex, rule: LadybugRule) -> Result<BurnsideCube<'a>> {
        let nc = cpx.diagram().num_crossings();
        let mut circles = HashMap::new();
        let mut surgeries = HashMap::new();
        for a in 0..cpx.left_matchings().len() {
            for b in 0..cpx.right_matchings().len() {
                for v in 0..1u32 << nc {
                    let cfg = cpx.config(a, b, v);
                    circles.insert((a, b, v), cfg.circles());
                    for c in 0..nc {
                        if (v >> c) & 1 == 0 {
                            surgeries.insert(((a, b, v), c), cfg.surgery(c)?);
                        }
                    }
                }
            }
        }
        Ok(BurnsideCube {
            cpx,
            rule,
            circles,
            surgeries,
            orientations: RefCell::new(HashMap::new()),
            pairings: RefCell::new(HashMap::new()),
            ladybug_seen: RefCell::new(0),
        })
    }

    fn targets(&self, key: Key, c: usize, x: u64) -> Vec<u64> {
        apply_surgery(x, &self.surgeries[&(key, c)])
    }

    fn orientation(&self, key: Key) -> Result<Vec<bool>> {
        if let Some(o) = self.orientations.borrow().get(&key) {
            return Ok(o.clone());
        }
        let o = self.cpx.config(key.0, key.1, key.2).orientations()?;
        self.orientations.borrow_mut().insert(key, o.clone());
        Ok(o)
    }

    /// The ladybug pairing for the face (ci < cj) at `key` with source `x`:
    /// both surgeries split the same circle `z_circle`.  Returns the matched
    /// intermediate labels (via ci, via cj).
    fn ladybug_pair(
        &self,
        key: Key,
        ci: usize,
        cj: usize,
        x: u64,
        z_circle: usize,
    ) -> Result<Vec<(u64, u64)>> {
        *self.ladybug_seen.borrow_mut() += 1;
        let circles = &self.circles[&key];
        let walk = &circles.walks[z_circle];
        let mut marked: Vec<(usize, usize)> = Vec::new();
        let mut forward0: HashMap<usize, bool> = HashMap::new();
        for &(r, f) in walk {
            if let StrandRef::Chord(s, w) = r {
                if s == ci || s == cj {
                    marked.push((s, w));
                    if w == 0 {
                        forward0.insert(s, f);
                    }
                }
            }
        }
        if marked.len() != 4 {
            return Err(KhError::Verification(format!(
                "ladybug face ({ci},{cj}) has {} marked chords",
                marked.len()
            )));
        }
        let ccw = self.orientation(key)?[z_circle];
        if !ccw {
            marked.reverse();
        }
        if marked[0].0 == marked[1].0 {
            return Err(KhError::Verification(
                "fiber of size two without interleaved chords".into(),
            ));
        }
        // Side of each site's surgery arc relative to the circle.  In state 0
        // the arc lies in the region left of chord 0's canonical direction,
        // which is the circle's inside exactly when the chord is walked
        // forward on a counterclockwise circle (or backward on a clockwise
        // one).  Interleaved arcs always sit on opposite sides.
        let inside = |s: usize| forward0[&s] == ccw;
        if inside(ci) == inside(cj) {
            return Err(KhError::Verification(
                "interleaved surgery arcs on the same side of the circle".into(),
            ));
        }
        let mut mirror = !inside(cj);
        if let LadybugRule::Corrupted = self.rule {
            if ci == 0 {
                mirror = !mirror;
            }
        }
        let si = &self.surgeries[&(key, ci)];
        let sj = &self.surgeries[&(key, cj)];
        let ci_circles = si.new.circles();
        let cj_circles = sj.new.circles();
        let mut base_i = 0u64;
        let mut base_j = 0u64;
        for (&old, &new) in &si.map {
            if bit(x, old) {
                base_i |= 1u64 << new;
            }
        }
        for (&old, &new) in &sj.map {
            if bit(x, old) {
                base_j |= 1u64 << new;
            }
        }
        let mut out = Vec::new();
        for (p, &beta) in marked.iter().enumerate() {
            if beta.0 != cj {
                continue;
            }
            let alpha = if mirror {
                marked[(p + 3) % 4]
            } else {
                marked[(p + 1) % 4]
            };
            debug_assert_eq!(alpha.0, ci);
            let yb = base_i | 1u64 << ci_circles.of(StrandRef::Chord(beta.0, beta.1));
            let ya = base_j | 1u64 << cj_circles.of(StrandRef::Chord(alpha.0, alpha.1));
            out.push((yb, ya));
        }
        Ok(out)
    }

    /// For a face at `key` over crossings ci < cj (both unresolved) and a
    /// source label `x`: for every composite target z, the canonical matching
    /// between the two routes' intermediate labels.
    fn face_pairing(
        &self,
        key: Key,
        ci: usize,
        cj: usize,
        x: u64,
    ) -> Result<HashMap<u64, Vec<(u64, u64)>>> {
        assert!(ci < cj);
        if let Some(p) = self.pairings.borrow().get(&(key, ci, cj, x)) {
            return Ok(p.clone());
        }
        let (a, b, v) = key;
        let mut via_i: HashMap<u64, Vec<u64>> = HashMap::new();
        for y in self.targets(key, ci, x) {
            for z in self.targets((a, b, v | 1 << ci), cj, y) {
                via_i.entry(z).or_default().push(y);
            }
        }
        let mut via_j: HashMap<u64, Vec<u64>> = HashMap::new();
        for y in self.targets(key, cj, x) {
            for z in self.targets((a, b, v | 1 << cj), ci, y) {
                via_j.entry(z).or_default().push(y);
            }
        }
        let mut result: HashMap<u64, Vec<(u64, u64)>> = HashMap::new();
        for (&z, ys) in &via_i {
            let ys2 = via_j.get(&z).map(|w| w.as_slice()).unwrap_or(&[]);
            if ys.len() != ys2.len() {
                return Err(KhError::Verification(format!(
                    "face ({ci},{cj}) fibers disagree: {} vs {}",
                    ys.len(),
                    ys2.len()
                )));
            }
            match ys.len() {
                1 => {
                    result.insert(z, vec![(ys[0], ys2[0])]);
                }
                2 => {
                    let (zc, ok) = match (&self.surgeries[&(key, ci)].kind,
                                          &self.surgeries[&(key, cj)].kind) {
                        (
                            SurgeryKind::Split { from: f1, .. },
                            SurgeryKind::Split { from: f2, .. },
                        ) => (*f1, f1 == f2),
                        _ => (0, false),
                    };
                    if !ok {
                        return Err(KhError::Verification(
                            "fiber of size two is not a double split".into(),
                        ));
                    }
                    let pairs = self.ladybug_pair(key, ci, cj, x, zc)?;
                    for &(yi, yj) in &pairs {
                        if !ys.contains(&yi) || !ys2.contains(&yj) {
                            return Err(KhError::Verification(
                                "ladybug pairing leaves the fiber".into(),
                            ));
                        }
                    }
                    if pairs.len() != 2 || pairs[0].0 == pairs[1].0 || pairs[0].1 == pairs[1].1 {
                        return Err(KhError::Verification(
                            "ladybug pairing is not a bijection".into(),
                        ));
                    }
                    result.insert(z, pairs);
                }
                n => {
                    return Err(KhError::Verification(format!("fiber of size {n}")));
                }
            }
        }
        for z in via_j.keys() {
            if !via_i.contains_key(z) {
                return Err(KhError::Verification(
                    "composite targets differ between routes".into(),
                ));
            }
        }
        self.pairings
            .borrow_mut()
            .insert((key, ci, cj, x), result.clone());
        Ok(result)
    }

    /// Look up the partner of intermediate `y` on the face (p, q) done p-first
    /// with source `x` and composite target `z`.
    fn partner(&self, key: Key, p: usize, q: usize, x: u64, z: u64, y: u64) -> Result<u64> {
        let (ci, cj) = (p.min(q), p.max(q));
        let pairing = self.face_pairing(key, ci, cj, x)?;
        let pairs = pairing.get(&z).ok_or_else(|| {
            KhError::Verification(format!("no fiber over target in face ({p},{q})"))
        })?;
        for &(yi, yj) in pairs {
            if p == ci && yi == y {
                return Ok(yj);
            }
            if p == cj && yj == y {
                return Ok(yi);
            }
        }
        Err(KhError::Verification(format!(
            "intermediate not found in face ({p},{q}) pairing"
        )))
    }

    /// Verify every two-dimensional face: equal fiber sizes and a well-formed
    /// canonical bijection.
    pub fn check_faces(&self) -> Result<CoherenceReport> {
        let nc = self.cpx.diagram().num_crossings();
        let mut report = CoherenceReport::default();
        for (&key, circ) in &self.circles {
            let v = key.2;
            for ci in 0..nc {
                for cj in ci + 1..nc {
                    if (v >> ci) & 1 == 1 || (v >> cj) & 1 == 1 {
                        continue;
                    }
                    report.faces_checked += 1;
                    for x in 0..(1u64 << circ.len()) {
                        self.face_pairing(key, ci, cj, x)?;
                    }
                }
            }
        }
        report.ladybug_faces = *self.ladybug_seen.borrow();
        Ok(report)
    }

    /// Verify hexagon coherence: around every three-dimensional face, the six
    /// face bijections compose to the identity on every fiber element.
    pub fn check_hexagons(&self) -> Result<usize> {
        let nc = self.cpx.diagram().num_crossings();
        let mut count = 0usize;
        for (&key, circ) in &self.circles {
            let (a, b, v) = key;
            for c1 in 0..nc {
                for c2 in c1 + 1..nc {
                    for c3 in c2 + 1..nc {
                        if (v >> c1) & 1 == 1 || (v >> c2) & 1 == 1 || (v >> c3) & 1 == 1 {
                            continue;
                        }
                        count += 1;
                        for x in 0..(1u64 << circ.len()) {
                            self.check_one_hexagon(key, [c1, c2, c3], x)?;
                        }
                        let _ = (a, b);
                    }
                }
            }
        }
        Ok(count)
    }

    fn check_one_hexagon(&self, key: Key, cs: [usize; 3], x: u64) -> Result<()> {
        let (a, b, v) = key;
        let [c1, c2, c3] = cs;
        // Fiber of the route c1-c2-c3: elements (w, y1, y2).
        let mut elements: Vec<(u64, u64, u64)> = Vec::new();
        for y1 in self.targets(key, c1, x) {
            for y2 in self.targets((a, b, v | 1 << c1), c2, y1) {
                for w in self.targets((a, b, v | (1 << c1) | (1 << c2)), c3, y2) {
                    elements.push((w, y1, y2));
                }
            }
        }
        for &(w, y1, y2) in &elements {
            // Walk around the hexagon of route orders:
            // 123 -> 213 -> 231 -> 321 -> 312 -> 132 -> 123.
            let (mut p, mut q, mut r) = (c1, c2, c3);
            let (mut u1, mut u2) = (y1, y2);
            for step in 0..6 {
                if step % 2 == 0 {
                    // Swap the first two surgeries: face (p,q) at v.
                    u1 = self.partner(key, p, q, x, u2, u1)?;
                    std::mem::swap(&mut p, &mut q);
                } else {
                    // Swap the last two: face (q,r) at v + e_p.
                    u2 = self.partner((a, b, v | 1 << p), q, r, u1, w, u2)?;
                    std::mem::swap(&mut q, &mut r);
                }
            }
            if (p, q, r) != (c1, c2, c3) || (u1, u2) != (y1, y2) {
                return Err(KhError::Verification(format!(
                    "hexagon at v={v} over crossings {c1},{c2},{c3} does not close up"
                )));
            }
        }
        Ok(())
    }

    /// The signed fiber counts must reproduce the differential of the complex.
    pub fn check_abelianization(&self) -> Result<()> {
        let nc = self.cpx.diagram().num_crossings();
        for (&(a, b, v), circ) in &self.circles {
            let off = |vv: u32| {
                self.cpx.index_of(crate::complex::Generator {
                    a,
                    b,
                    v: vv,
                    label: 0,
                })
            };
            for x in 0..(1u64 << circ.len()) {
                let mut expected: Vec<(usize, i64)> = Vec::new();
                for c in 0..nc {
                    if (v >> c) & 1 == 1 {
                        continue;
                    }
                    let s = edge_sign(v, c);
                    for z in self.targets((a, b, v), c, x) {
                        expected.push((off(v | 1 << c) + z as usize, s));
                    }
                }
                expected.sort();
                let i = off(v) + x as usize;
                if expected != self.cpx.differential(i) {
                    return Err(KhError::Verification(format!(
                        "correspondence cardinalities disagree with d at generator {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_all(&self) -> Result<CoherenceReport> {
        self.check_abelianization()?;
        let mut report = self.check_faces()?;
        report.hexagons_checked = self.check_hexagons()?;
        report.ladybug_faces = *self.ladybug_seen.borrow();
        Ok(report)
    }
}
