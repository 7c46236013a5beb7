//! Curve configurations: closed 1-manifolds with marked surgery sites.
//!
//! A configuration is a set of points, plain strands (unknotted segments
//! pairing points), and sites.  A site is a disk with four marked boundary
//! points `P0,P1,P2,P3` in counterclockwise order; in state 0 it contains the
//! chords `P0–P1` and `P2–P3`, and in state 1 the chords `P0–P3` and `P1–P2`.
//! Toggling a site's state is the elementary saddle surgery.
//!
//! Two constructions cover every use:
//! * `closure_config` — the resolution of a tangle diagram closed off by
//!   crossingless matchings on both sides; sites are the crossings.
//! * `collapse_join` — two configurations placed side by side with the arcs
//!   of a shared middle matching turned into sites, ready to be collapsed by
//!   saddles (algebra products, module actions, gluing).
//!
//! Circle orientations (needed only for the ladybug rule) are computed by
//! region tracing: sides of strands are glued across points and across site
//! disks, the resulting region classes of each connected component form a
//! tree rooted at the component's outer region, and a circle is
//! counterclockwise exactly when its left side is the inner one.

use crate::diagram::{Att, TangleDiagram};
use crate::error::{KhError, Result};
use crate::matching::CrossinglessMatching;
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StrandKind {
    Internal,
    /// Closure arc on the left boundary; payload is the lower boundary point
    /// (1-based).  The strand runs from its lower to its upper point.
    LeftArc(usize),
    /// Closure arc on the right boundary, lower point first.
    RightArc(usize),
}

/// Identity of a strand: a plain strand, or chord `k` (0 or 1) of a site.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum StrandRef {
    Plain(usize),
    Chord(usize, usize),
}

/// Landmarks let circles of two different configurations of the same
/// underlying picture be matched up: a point may be tagged as slot `s` of
/// crossing `c`.
pub type Landmark = (usize, usize);

/// Signature entries identifying a circle across configurations: the crossing
/// slots it visits and the closure arcs it contains (keyed by lower boundary
/// point).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SigKey {
    Slot(usize, usize),
    LeftPair(usize),
    RightPair(usize),
}

#[derive(Clone, Debug)]
pub struct CurveDiagram {
    n_points: usize,
    plain: Vec<(usize, usize)>,
    plain_kind: Vec<StrandKind>,
    sites: Vec<[usize; 4]>,
    states: Vec<u8>,
    landmarks: Vec<Option<Landmark>>,
}

/// The circles of a configuration, each an ordered walk of strands; the
/// boolean records whether the strand is traversed along its canonical
/// direction.
#[derive(Clone, Debug)]
pub struct Circles {
    pub walks: Vec<Vec<(StrandRef, bool)>>,
    of: HashMap<StrandRef, usize>,
}

impl Circles {
    pub fn len(&self) -> usize {
        self.walks.len()
    }
    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
    pub fn of(&self, r: StrandRef) -> usize {
        self.of[&r]
    }
    pub fn get(&self, r: StrandRef) -> Option<usize> {
        self.of.get(&r).copied()
    }
}

/// Effect of toggling one site.
#[derive(Clone, Debug)]
pub enum SurgeryKind {
    /// Circles `from.0` and `from.1` of the old configuration merge into
    /// circle `into` of the new one.
    Merge { from: (usize, usize), into: usize },
    /// Circle `from` splits into circles `into.0` and `into.1`.
    Split { from: usize, into: (usize, usize) },
}

#[derive(Clone, Debug)]
pub struct Surgery {
    pub new: CurveDiagram,
    pub kind: SurgeryKind,
    /// Old circle index -> new circle index for circles untouched by the
    /// surgery.
    pub map: HashMap<usize, usize>,
}

impl CurveDiagram {
    pub fn new(
        n_points: usize,
        plain: Vec<(usize, usize)>,
        plain_kind: Vec<StrandKind>,
        sites: Vec<[usize; 4]>,
        states: Vec<u8>,
        landmarks: Vec<Option<Landmark>>,
    ) -> Result<Self> {
        let d = CurveDiagram {
            n_points,
            plain,
            plain_kind,
            sites,
            states,
            landmarks,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        if self.plain.len() != self.plain_kind.len()
            || self.sites.len() != self.states.len()
            || self.landmarks.len() != self.n_points
        {
            return Err(KhError::InvalidDiagram(
                "curve diagram component lengths disagree".into(),
            ));
        }
        let mut deg = vec![0usize; self.n_points];
        let mut bump = |p: usize| -> Result<()> {
            if p >= self.n_points {
                return Err(KhError::InvalidDiagram(format!(
                    "curve point {p} out of range"
                )));
            }
            deg[p] += 1;
            Ok(())
        };
        for &(u, v) in &self.plain {
            bump(u)?;
            bump(v)?;
        }
        for ps in &self.sites {
            for &p in ps {
                bump(p)?;
            }
        }
        if let Some(p) = deg.iter().position(|&d| d != 2) {
            return Err(KhError::InvalidDiagram(format!(
                "curve point {p} has degree {}, expected 2",
                deg[p]
            )));
        }
        if let Some(s) = self.states.iter().position(|&s| s > 1) {
            return Err(KhError::InvalidDiagram(format!(
                "site {s} has state {} (must be 0 or 1)",
                self.states[s]
            )));
        }
        Ok(())
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }
    pub fn states(&self) -> &[u8] {
        &self.states
    }
    pub fn site_points(&self, s: usize) -> [usize; 4] {
        self.sites[s]
    }
    pub fn landmark(&self, p: usize) -> Option<Landmark> {
        self.landmarks[p]
    }
    pub fn strand_kind(&self, r: StrandRef) -> StrandKind {
        match r {
            StrandRef::Plain(i) => self.plain_kind[i],
            StrandRef::Chord(..) => StrandKind::Internal,
        }
    }

    /// Canonical (tail, head) of a strand.
    pub fn endpoints(&self, r: StrandRef) -> (usize, usize) {
        match r {
            StrandRef::Plain(i) => self.plain[i],
            StrandRef::Chord(s, k) => {
                let [p0, p1, p2, p3] = self.sites[s];
                match (self.states[s], k) {
                    (0, 0) => (p0, p1),
                    (0, 1) => (p2, p3),
                    (1, 0) => (p0, p3),
                    (1, 1) => (p1, p2),
                    _ => unreachable!(),
                }
            }
        }
    }

    pub fn all_strands(&self) -> Vec<StrandRef> {
        let mut v: Vec<StrandRef> = (0..self.plain.len()).map(StrandRef::Plain).collect();
        for s in 0..self.sites.len() {
            v.push(StrandRef::Chord(s, 0));
            v.push(StrandRef::Chord(s, 1));
        }
        v
    }

    /// Ends incident to each point: (strand, 0 = tail / 1 = head).
    fn ends(&self) -> Vec<Vec<(StrandRef, u8)>> {
        let mut ends: Vec<Vec<(StrandRef, u8)>> = vec![Vec::new(); self.n_points];
        for r in self.all_strands() {
            let (t, h) = self.endpoints(r);
            ends[t].push((r, 0));
            ends[h].push((r, 1));
        }
        ends
    }

    /// Trace the circles.  Deterministic: circles are discovered in order of
    /// their smallest strand.
    pub fn circles(&self) -> Circles {
        let ends = self.ends();
        let mut of: HashMap<StrandRef, usize> = HashMap::new();
        let mut walks = Vec::new();
        for start in self.all_strands() {
            if of.contains_key(&start) {
                continue;
            }
            let id = walks.len();
            let mut walk = Vec::new();
            let mut cur = start;
            let mut forward = true;
            loop {
                of.insert(cur, id);
                walk.push((cur, forward));
                let (t, h) = self.endpoints(cur);
                let exit = if forward { h } else { t };
                let here = if forward { 1u8 } else { 0u8 };
                let &(next, next_end) = ends[exit]
                    .iter()
                    .find(|&&(r, e)| (r, e) != (cur, here))
                    .expect("degree-2 point");
                if next == start {
                    break;
                }
                cur = next;
                forward = next_end == 0;
            }
            walks.push(walk);
        }
        Circles { walks, of }
    }

    /// Toggle the state of one site.
    pub fn flip(&self, site: usize) -> CurveDiagram {
        let mut d = self.clone();
        d.states[site] ^= 1;
        d
    }

    /// Perform the surgery at `site`, reporting how circles correspond.
    pub fn surgery(&self, site: usize) -> Result<Surgery> {
        let old = self.circles();
        let new_cfg = self.flip(site);
        let new = new_cfg.circles();
        let mut map = HashMap::new();
        for (i, walk) in old.walks.iter().enumerate() {
            if walk
                .iter()
                .any(|&(r, _)| matches!(r, StrandRef::Chord(s, _) if s == site))
            {
                continue;
            }
            map.insert(i, new.of(walk[0].0));
        }
        let oc0 = old.of(StrandRef::Chord(site, 0));
        let oc1 = old.of(StrandRef::Chord(site, 1));
        let nc0 = new.of(StrandRef::Chord(site, 0));
        let nc1 = new.of(StrandRef::Chord(site, 1));
        let kind = if oc0 == oc1 {
            if nc0 == nc1 {
                return Err(KhError::Verification(format!(
                    "surgery at site {site} neither merges nor splits"
                )));
            }
            SurgeryKind::Split {
                from: oc0,
                into: (nc0, nc1),
            }
        } else {
            if nc0 != nc1 {
                return Err(KhError::Verification(format!(
                    "surgery at site {site} neither merges nor splits"
                )));
            }
            SurgeryKind::Merge {
                from: (oc0, oc1),
                into: nc0,
            }
        };
        Ok(Surgery {
            new: new_cfg,
            kind,
            map,
        })
    }

    /// Counterclockwise-ness of each circle.
    pub fn orientations(&self) -> Result<Vec<bool>> {
        let strands = self.all_strands();
        let idx_of: HashMap<StrandRef, usize> =
            strands.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        // Side keys: 2*i = left of strand i (walked tail -> head), 2*i+1 = right.
        let mut dsu: Vec<usize> = (0..2 * strands.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
            }
        };
        let left = |r: StrandRef| 2 * idx_of[&r];
        let right = |r: StrandRef| 2 * idx_of[&r] + 1;
        // Side continuity through each degree-2 point.
        for ends in self.ends() {
            let (r1, e1) = ends[0];
            let (r2, e2) = ends[1];
            if e1 != e2 {
                union(&mut dsu, left(r1), left(r2));
                union(&mut dsu, right(r1), right(r2));
            } else {
                union(&mut dsu, left(r1), right(r2));
                union(&mut dsu, right(r1), left(r2));
            }
        }
        // Site disks: in state 0 the region between the chords lies to the
        // left of both canonical chord walks; in state 1 it lies to the right
        // of chord 0 and the left of chord 1.
        for (s, &state) in self.states.iter().enumerate() {
            let c0 = StrandRef::Chord(s, 0);
            let c1 = StrandRef::Chord(s, 1);
            if state == 0 {
                union(&mut dsu, left(c0), left(c1));
            } else {
                union(&mut dsu, right(c0), left(c1));
            }
        }
        let circles = self.circles();
        // Side classes per circle, checked for consistency along the walk.
        let mut circle_left = vec![usize::MAX; circles.len()];
        let mut circle_right = vec![usize::MAX; circles.len()];
        for (ci, walk) in circles.walks.iter().enumerate() {
            for &(r, forward) in walk {
                let (l, rr) = if forward {
                    (find(&mut dsu, left(r)), find(&mut dsu, right(r)))
                } else {
                    (find(&mut dsu, right(r)), find(&mut dsu, left(r)))
                };
                if circle_left[ci] == usize::MAX {
                    circle_left[ci] = l;
                    circle_right[ci] = rr;
                } else if circle_left[ci] != l || circle_right[ci] != rr {
                    return Err(KhError::Verification(
                        "inconsistent region classes along a circle".into(),
                    ));
                }
            }
        }
        // Connected components: circles linked through shared sites.
        let mut comp: Vec<usize> = (0..circles.len()).collect();
        for s in 0..self.sites.len() {
            let a = circles.of(StrandRef::Chord(s, 0));
            let b = circles.of(StrandRef::Chord(s, 1));
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra != rb {
                comp[ra] = rb;
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for ci in 0..circles.len() {
            let r = find(&mut comp, ci);
            groups.entry(r).or_default().push(ci);
        }
        let mut ccw = vec![false; circles.len()];
        for group in groups.values() {
            // Region tree of the component: nodes are side classes, edges are
            // circles.
            let mut nodes: Vec<usize> = Vec::new();
            for &ci in group {
                for cls in [circle_left[ci], circle_right[ci]] {
                    if !nodes.contains(&cls) {
                        nodes.push(cls);
                    }
                }
            }
            if nodes.len() != group.len() + 1 {
                return Err(KhError::Verification(format!(
                    "region classes do not form a tree: {} circles, {} regions",
                    group.len(),
                    nodes.len()
                )));
            }
            // Anchor: the component's outer region.
            let mut anchor: Option<(usize, usize)> = None; // (priority key, class)
            let mut fiat: Option<(StrandRef, usize)> = None;
            for &ci in group {
                for &(r, _) in &circles.walks[ci] {
                    match self.strand_kind(r) {
                        StrandKind::LeftArc(p) => {
                            let cand = (p, find(&mut dsu, left(r)));
                            if anchor.map_or(true, |(k, _)| p < k) {
                                anchor = Some(cand);
                            }
                        }
                        StrandKind::RightArc(p) => {
                            // Left arcs take precedence; offset right-arc keys
                            // past every possible left-arc key.
                            let key = self.n_points + p;
                            let cand = (key, find(&mut dsu, right(r)));
                            if anchor.map_or(true, |(k, _)| key < k) {
                                anchor = Some(cand);
                            }
                        }
                        StrandKind::Internal => {
                            if matches!(r, StrandRef::Plain(_))
                                && fiat.map_or(true, |(fr, _)| r < fr)
                            {
                                fiat = Some((r, find(&mut dsu, left(r))));
                            }
                        }
                    }
                }
            }
            let root = match (anchor, fiat) {
                (Some((_, cls)), _) => cls,
                (None, Some((_, cls))) => cls,
                (None, None) => {
                    return Err(KhError::Verification(
                        "component has no plain strand to anchor its outer region".into(),
                    ))
                }
            };
            // Breadth-first depths from the root through circle edges.
            let mut depth: HashMap<usize, usize> = HashMap::new();
            depth.insert(root, 0);
            let mut frontier = vec![root];
            while let Some(cls) = frontier.pop() {
                let d = depth[&cls];
                for &ci in group {
                    let (l, r) = (circle_left[ci], circle_right[ci]);
                    let other = if l == cls {
                        r
                    } else if r == cls {
                        l
                    } else {
                        continue;
                    };
                    if !depth.contains_key(&other) {
                        depth.insert(other, d + 1);
                        frontier.push(other);
                    }
                }
            }
            if depth.len() != nodes.len() {
                return Err(KhError::Verification(
                    "region tree of a component is disconnected".into(),
                ));
            }
            for &ci in group {
                let (l, r) = (circle_left[ci], circle_right[ci]);
                if l == r || depth[&l].abs_diff(depth[&r]) != 1 {
                    return Err(KhError::Verification(
                        "circle does not separate adjacent regions".into(),
                    ));
                }
                // Counterclockwise iff the inside (deeper region) is on the left.
                ccw[ci] = depth[&l] > depth[&r];
            }
        }
        Ok(ccw)
    }

    /// Sorted signature of each circle: visited crossing slots plus closure
    /// arc keys.
    pub fn circle_signatures(&self) -> Vec<Vec<SigKey>> {
        let circles = self.circles();
        let mut sigs = vec![Vec::new(); circles.len()];
        for (ci, walk) in circles.walks.iter().enumerate() {
            let mut sig = Vec::new();
            for &(r, _) in walk {
                match self.strand_kind(r) {
                    StrandKind::LeftArc(p) => sig.push(SigKey::LeftPair(p)),
                    StrandKind::RightArc(p) => sig.push(SigKey::RightPair(p)),
                    StrandKind::Internal => {}
                }
                let (t, h) = self.endpoints(r);
                for p in [t, h] {
                    if let Some((c, s)) = self.landmarks[p] {
                        sig.push(SigKey::Slot(c, s));
                    }
                }
            }
            sig.sort();
            sig.dedup();
            sigs[ci] = sig;
        }
        sigs
    }
}

/// Match the circles of `x` to the circles of `y` by signature.  Circles with
/// identical signatures (typically closed circles with no landmarks) are
/// paired off in index order.
pub fn match_circles(x: &CurveDiagram, y: &CurveDiagram) -> Result<Vec<usize>> {
    let sx = x.circle_signatures();
    let sy = y.circle_signatures();
    let mut by_sig: HashMap<&[SigKey], Vec<usize>> = HashMap::new();
    for (i, sig) in sy.iter().enumerate() {
        by_sig.entry(sig.as_slice()).or_default().push(i);
    }
    let mut used: HashMap<&[SigKey], usize> = HashMap::new();
    let mut out = Vec::with_capacity(sx.len());
    for sig in &sx {
        let cands = by_sig.get(sig.as_slice()).ok_or_else(|| {
            KhError::Verification(format!("no matching circle for signature {sig:?}"))
        })?;
        let k = used.entry(sig.as_slice()).or_insert(0);
        if *k >= cands.len() {
            return Err(KhError::Verification(format!(
                "too many circles share signature {sig:?}"
            )));
        }
        out.push(cands[*k]);
        *k += 1;
    }
    if sx.len() != sy.len() {
        return Err(KhError::Verification(format!(
            "circle counts differ: {} vs {}",
            sx.len(),
            sy.len()
        )));
    }
    Ok(out)
}

/// The resolution of a tangle diagram at `v`, closed by the reflection of `a`
/// on the left and by `b` on the right.  Sites are the crossings, in order.
pub fn closure_config(
    t: &TangleDiagram,
    v: &[u8],
    a: &CrossinglessMatching,
    b: &CrossinglessMatching,
) -> Result<CurveDiagram> {
    let nc = t.num_crossings();
    if v.len() != nc {
        return Err(KhError::InvalidDiagram(format!(
            "resolution has {} coordinates, expected {nc}",
            v.len()
        )));
    }
    if a.n() != t.m() || b.n() != t.n() {
        return Err(KhError::BoundaryMismatch(format!(
            "closure matchings on {} and {} points do not fit boundaries {} and {}",
            2 * a.n(),
            2 * b.n(),
            2 * t.m(),
            2 * t.n()
        )));
    }
    let pt = |att: Att| -> usize {
        match att {
            Att::Cross(c, s) => 4 * c + s,
            Att::Left(i) => 4 * nc + i,
            Att::Right(i) => 4 * nc + 2 * t.m() + i,
        }
    };
    let mut n_points = 4 * nc + 2 * t.m() + 2 * t.n();
    let mut plain = Vec::new();
    let mut plain_kind = Vec::new();
    let mut bigons = Vec::new();
    for atts in t.attachments() {
        match atts.len() {
            2 => {
                plain.push((pt(atts[0]), pt(atts[1])));
                plain_kind.push(StrandKind::Internal);
            }
            0 => bigons.push(()),
            _ => unreachable!(),
        }
    }
    for &(p, q) in a.pairs() {
        plain.push((pt(Att::Left(p - 1)), pt(Att::Left(q - 1))));
        plain_kind.push(StrandKind::LeftArc(p));
    }
    for &(p, q) in b.pairs() {
        plain.push((pt(Att::Right(p - 1)), pt(Att::Right(q - 1))));
        plain_kind.push(StrandKind::RightArc(p));
    }
    let mut landmarks: Vec<Option<Landmark>> = Vec::new();
    for c in 0..nc {
        for s in 0..4 {
            landmarks.push(Some((c, s)));
        }
    }
    landmarks.resize(4 * nc + 2 * t.m() + 2 * t.n(), None);
    for _ in bigons {
        let u = n_points;
        n_points += 2;
        plain.push((u, u + 1));
        plain_kind.push(StrandKind::Internal);
        plain.push((u, u + 1));
        plain_kind.push(StrandKind::Internal);
        landmarks.push(None);
        landmarks.push(None);
    }
    let sites: Vec<[usize; 4]> = (0..nc).map(|c| [4 * c, 4 * c + 1, 4 * c + 2, 4 * c + 3]).collect();
    CurveDiagram::new(n_points, plain, plain_kind, sites, v.to_vec(), landmarks)
}

/// The closed flat diagram of a pair of matchings: the reflection of `a`
/// glued to `c` along one column of `2n` points.
pub fn matching_pair_config(a: &CrossinglessMatching, c: &CrossinglessMatching) -> CurveDiagram {
    assert_eq!(a.n(), c.n());
    let n = a.n();
    let mut plain = Vec::new();
    let mut plain_kind = Vec::new();
    for &(p, q) in a.pairs() {
        plain.push((p - 1, q - 1));
        plain_kind.push(StrandKind::LeftArc(p));
    }
    for &(p, q) in c.pairs() {
        plain.push((p - 1, q - 1));
        plain_kind.push(StrandKind::RightArc(p));
    }
    CurveDiagram::new(
        2 * n,
        plain,
        plain_kind,
        vec![],
        vec![],
        vec![None; 2 * n],
    )
    .expect("matching pair configuration")
}

/// Place `l` and `r` side by side and turn the arcs of the middle matching
/// `b` into collapse sites in state 0.
///
/// `l_ports[i]` / `r_ports[i]` are the points of `l` / `r` where boundary
/// point `i+1` of the shared matching sits; for each pair `(p,q)` of `b`, `l`
/// must contain a plain strand joining ports `p` and `q` (the arc bulging
/// towards the junction) and likewise `r`.  Those strands become the chords
/// of a new site `[Lq, Lp, Rp, Rq]`.  Collapse sites follow the sites of `l`
/// and `r`, one per pair of `b` in pair order.  Crossing landmarks of `r` are
/// shifted by `r_slot_offset` so the joined configuration can be matched
/// against a composite diagram.
pub fn collapse_join(
    l: &CurveDiagram,
    l_ports: &[usize],
    r: &CurveDiagram,
    r_ports: &[usize],
    b: &CrossinglessMatching,
    r_slot_offset: usize,
) -> Result<CollapseJoin> {
    if l_ports.len() != 2 * b.n() || r_ports.len() != 2 * b.n() {
        return Err(KhError::BoundaryMismatch(format!(
            "port lists of lengths {} and {} for a matching on {} points",
            l_ports.len(),
            r_ports.len(),
            2 * b.n()
        )));
    }
    let off = l.n_points;
    let mut plain = Vec::new();
    let mut plain_kind = Vec::new();
    // Strands of the two pieces, minus the ones that become chords.
    let mut l_removed = vec![false; l.plain.len()];
    let mut r_removed = vec![false; r.plain.len()];
    // Both pieces can contain two parallel arcs between the same points (for
    // example `a` against `a`); the one that becomes the chord is the arc
    // facing the junction: a right-side arc of `l`, a left-side arc of `r`.
    let find_strand = |piece: &CurveDiagram, u: usize, v: usize, prefer_right: bool| {
        let hits: Vec<usize> = piece
            .plain
            .iter()
            .enumerate()
            .filter(|&(_, &(a2, b2))| (a2, b2) == (u, v) || (a2, b2) == (v, u))
            .map(|(i, _)| i)
            .collect();
        hits.iter()
            .copied()
            .find(|&i| {
                if prefer_right {
                    matches!(piece.plain_kind[i], StrandKind::RightArc(_))
                } else {
                    matches!(piece.plain_kind[i], StrandKind::LeftArc(_))
                }
            })
            .or_else(|| hits.first().copied())
    };
    let mut new_sites: Vec<[usize; 4]> = Vec::new();
    let mut l_chord: HashMap<usize, usize> = HashMap::new(); // l plain -> pair index
    let mut r_chord: HashMap<usize, usize> = HashMap::new();
    for (pi, &(p, q)) in b.pairs().iter().enumerate() {
        let (lp, lq) = (l_ports[p - 1], l_ports[q - 1]);
        let (rp, rq) = (r_ports[p - 1], r_ports[q - 1]);
        let ls = find_strand(l, lp, lq, true).ok_or_else(|| {
            KhError::InvalidDiagram(format!("left piece has no arc for pair ({p},{q})"))
        })?;
        let rs = find_strand(r, rp, rq, false).ok_or_else(|| {
            KhError::InvalidDiagram(format!("right piece has no arc for pair ({p},{q})"))
        })?;
        l_removed[ls] = true;
        r_removed[rs] = true;
        l_chord.insert(ls, pi);
        r_chord.insert(rs, pi);
        new_sites.push([lq, lp, off + rp, off + rq]);
    }
    let mut l_strand: Vec<Option<StrandRef>> = vec![None; l.plain.len()];
    let mut r_strand: Vec<Option<StrandRef>> = vec![None; r.plain.len()];
    for (i, &(u, v)) in l.plain.iter().enumerate() {
        if !l_removed[i] {
            l_strand[i] = Some(StrandRef::Plain(plain.len()));
            plain.push((u, v));
            plain_kind.push(l.plain_kind[i]);
        }
    }
    for (i, &(u, v)) in r.plain.iter().enumerate() {
        if !r_removed[i] {
            r_strand[i] = Some(StrandRef::Plain(plain.len()));
            plain.push((u + off, v + off));
            plain_kind.push(r.plain_kind[i]);
        }
    }
    let mut sites = l.sites.clone();
    let mut states = l.states.clone();
    for ps in &r.sites {
        sites.push([ps[0] + off, ps[1] + off, ps[2] + off, ps[3] + off]);
    }
    states.extend_from_slice(&r.states);
    let first_collapse = sites.len();
    for s in new_sites {
        sites.push(s);
        states.push(0);
    }
    for (ls, pi) in &l_chord {
        l_strand[*ls] = Some(StrandRef::Chord(first_collapse + pi, 0));
    }
    for (rs, pi) in &r_chord {
        r_strand[*rs] = Some(StrandRef::Chord(first_collapse + pi, 1));
    }
    let mut landmarks = l.landmarks.clone();
    landmarks.extend(
        r.landmarks
            .iter()
            .map(|lm| lm.map(|(c, s)| (c + r_slot_offset, s))),
    );
    // The fused junction points are no longer outer boundary landmarks.
    for &p in l_ports {
        landmarks[p] = None;
    }
    for &p in r_ports {
        landmarks[p + off] = None;
    }
    let joined = CurveDiagram::new(
        l.n_points + r.n_points,
        plain,
        plain_kind,
        sites,
        states,
        landmarks,
    )?;
    let jc = joined.circles();
    let circle_map = |piece: &CurveDiagram,
                      strand: &[Option<StrandRef>],
                      chord_base: usize|
     -> Vec<usize> {
        piece
            .circles()
            .walks
            .iter()
            .map(|walk| {
                let rep = walk
                    .iter()
                    .map(|&(r, _)| match r {
                        StrandRef::Plain(i) => strand[i].expect("mapped strand"),
                        StrandRef::Chord(s, k) => StrandRef::Chord(s + chord_base, k),
                    })
                    .next()
                    .expect("nonempty circle");
                jc.of(rep)
            })
            .collect()
    };
    let l_circles = circle_map(l, &l_strand, 0);
    let r_circles = circle_map(r, &r_strand, l.sites.len());
    Ok(CollapseJoin {
        joined,
        first_site: first_collapse,
        l_circles,
        r_circles,
    })
}

/// A side-by-side join ready for collapsing, with circle index maps from the
/// two pieces into the joined configuration.
#[derive(Clone, Debug)]
pub struct CollapseJoin {
    pub joined: CurveDiagram,
    /// Index of the first collapse site; sites `first_site..first_site + n`
    /// are the middle arcs in pair order.
    pub first_site: usize,
    pub l_circles: Vec<usize>,
    pub r_circles: Vec<usize>,
}

/// Port points of a closure configuration's right boundary.
pub fn closure_right_ports(t: &TangleDiagram) -> Vec<usize> {
    let nc = t.num_crossings();
    (0..2 * t.n()).map(|i| 4 * nc + 2 * t.m() + i).collect()
}

/// Port points of a closure configuration's left boundary.
pub fn closure_left_ports(t: &TangleDiagram) -> Vec<usize> {
    let nc = t.num_crossings();
    (0..2 * t.m()).map(|i| 4 * nc + i).collect()
}

/// The crossingless matching connecting the right boundary points of a
/// `(0,2n)`-tangle resolved at `v`, together with the number of closed
/// circles of the resolution.
pub fn resolved_matching(t: &TangleDiagram, v: &[u8]) -> Result<(CrossinglessMatching, usize)> {
    if t.m() != 0 {
        return Err(KhError::InvalidDiagram(
            "resolved matching needs an empty left boundary".into(),
        ));
    }
    // Close with any matching and subtract it back out by tracing instead:
    // simpler to trace the open resolution directly via a closure against a
    // dummy matching is not possible, so trace point connectivity by hand.
    let nc = t.num_crossings();
    let mut dsu: Vec<usize> = (0..4 * nc + 2 * t.n()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra] = rb;
        }
    };
    let pt = |att: Att| -> usize {
        match att {
            Att::Cross(c, s) => 4 * c + s,
            Att::Right(i) => 4 * nc + i,
            Att::Left(_) => unreachable!(),
        }
    };
    let mut free_loops = 0usize;
    for atts in t.attachments() {
        match atts.len() {
            2 => union(&mut dsu, pt(atts[0]), pt(atts[1])),
            _ => free_loops += 1,
        }
    }
    for (c, &s) in v.iter().enumerate() {
        if s == 0 {
            union(&mut dsu, 4 * c, 4 * c + 1);
            union(&mut dsu, 4 * c + 2, 4 * c + 3);
        } else {
            union(&mut dsu, 4 * c, 4 * c + 3);
            union(&mut dsu, 4 * c + 1, 4 * c + 2);
        }
    }
    let mut pairs = Vec::new();
    let mut partner: HashMap<usize, usize> = HashMap::new();
    for i in 0..2 * t.n() {
        let r = find(&mut dsu, 4 * nc + i);
        if let Some(&j) = partner.get(&r) {
            pairs.push((j + 1, i + 1));
        } else {
            partner.insert(r, i);
        }
    }
    let matching = CrossinglessMatching::new(t.n(), pairs)?;
    // Closed circles: classes of crossing-slot points not reaching the boundary,
    // plus free loops.
    let mut closed = std::collections::HashSet::new();
    for p in 0..4 * nc {
        closed.insert(find(&mut dsu, p));
    }
    for i in 0..2 * t.n() {
        closed.remove(&find(&mut dsu, 4 * nc + i));
    }
    Ok((matching, closed.len() + free_loops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::matching::enumerate_matchings;

    fn empty() -> CrossinglessMatching {
        CrossinglessMatching::new(0, vec![]).unwrap()
    }

    fn resolutions(nc: usize) -> Vec<Vec<u8>> {
        (0..1u32 << nc)
            .map(|m| (0..nc).map(|c| ((m >> c) & 1) as u8).collect())
            .collect()
    }

    #[test]
    fn unknot_zero_closure() {
        let t = corpus::unknot_zero();
        let cfg = closure_config(&t, &[], &empty(), &empty()).unwrap();
        assert_eq!(cfg.circles().len(), 1);
        assert_eq!(cfg.orientations().unwrap().len(), 1);
    }

    #[test]
    fn kink_circle_counts() {
        for positive in [false, true] {
            let t = corpus::kink(positive);
            let c0 = closure_config(&t, &[0], &empty(), &empty()).unwrap();
            let c1 = closure_config(&t, &[1], &empty(), &empty()).unwrap();
            // The small loop detaches in exactly one of the two resolutions.
            let (a, b) = (c0.circles().len(), c1.circles().len());
            if positive {
                assert_eq!((a, b), (2, 1), "positive kink");
            } else {
                assert_eq!((a, b), (1, 2), "negative kink");
            }
        }
    }

    #[test]
    fn hopf_circle_counts() {
        let t = corpus::closed_braid(2, &[(1, true), (1, true)]).unwrap();
        let counts: Vec<usize> = resolutions(2)
            .iter()
            .map(|v| closure_config(&t, v, &empty(), &empty()).unwrap().circles().len())
            .collect();
        assert_eq!(counts, vec![2, 1, 1, 2]);
    }

    #[test]
    fn sec63_resolved_matchings() {
        let t = corpus::sec63_tangle();
        let a = CrossinglessMatching::new(2, vec![(1, 2), (3, 4)]).unwrap();
        let b = CrossinglessMatching::new(2, vec![(1, 4), (2, 3)]).unwrap();
        let (m0, c0) = resolved_matching(&t, &[0]).unwrap();
        let (m1, c1) = resolved_matching(&t, &[1]).unwrap();
        assert_eq!(m0, a);
        assert_eq!(m1, b);
        assert_eq!((c0, c1), (0, 0));
        // Closure circle counts against both matchings.
        for (v, c, want) in [(0u8, &a, 2usize), (0, &b, 1), (1, &a, 1), (1, &b, 2)] {
            let cfg = closure_config(&t, &[v], &empty(), c).unwrap();
            assert_eq!(cfg.circles().len(), want, "v={v} close={c}");
        }
    }

    #[test]
    fn matching_pair_circle_counts() {
        for n in 1..=4 {
            for a in enumerate_matchings(n) {
                for c in enumerate_matchings(n) {
                    let cfg = matching_pair_config(&a, &c);
                    let k = cfg.circles().len();
                    assert!(k >= 1 && k <= n);
                    if a == c {
                        assert_eq!(k, n);
                    }
                    cfg.orientations().unwrap();
                }
            }
        }
    }

    #[test]
    fn orientations_exist_on_corpus_resolutions() {
        for (name, t) in corpus::standard_corpus() {
            let asides = enumerate_matchings(t.m());
            let bsides = enumerate_matchings(t.n());
            for v in resolutions(t.num_crossings()) {
                for a in &asides {
                    for b in &bsides {
                        let cfg = closure_config(&t, &v, a, b).unwrap();
                        cfg.orientations()
                            .unwrap_or_else(|e| panic!("{name} v={v:?} a={a} b={b}: {e}"));
                    }
                }
            }
        }
    }

    #[test]
    fn surgery_merge_split_roundtrip() {
        let t = corpus::closed_braid(2, &[(1, true), (1, true)]).unwrap();
        let cfg = closure_config(&t, &[0, 0], &empty(), &empty()).unwrap();
        let s = cfg.surgery(0).unwrap();
        match s.kind {
            SurgeryKind::Merge { .. } => {}
            _ => panic!("expected a merge"),
        }
        let back = s.new.surgery(0).unwrap();
        match back.kind {
            SurgeryKind::Split { .. } => {}
            _ => panic!("expected a split"),
        }
        assert_eq!(back.new.states(), cfg.states());
    }

    #[test]
    fn collapse_join_algebra_shape() {
        // Two flat pair diagrams joined along the middle matching: the
        // product configuration of the arc algebra.
        let ms = enumerate_matchings(2);
        let a = &ms[0];
        let b = &ms[1];
        let left = matching_pair_config(a, b);
        let right = matching_pair_config(b, a);
        let ports: Vec<usize> = (0..4).collect();
        let cj = collapse_join(&left, &ports, &right, &ports, b, 0).unwrap();
        assert_eq!(cj.first_site, 0);
        assert_eq!(cj.joined.num_sites(), 2);
        assert_eq!(cj.l_circles.len(), left.circles().len());
        assert_eq!(cj.r_circles.len(), right.circles().len());
        // Collapsing both sites leaves the circles of a against itself.
        let mut cur = cj.joined;
        for s in 0..2 {
            cur = cur.surgery(s).unwrap().new;
        }
        let target = matching_pair_config(a, a);
        let map = match_circles(&cur, &target).unwrap();
        assert_eq!(map.len(), target.circles().len());
    }

    #[test]
    fn nesting_orientation() {
        // One circle nested in another, joined by a site: the outer circle
        // and inner circle get opposite orientations exactly when their left
        // sides point at different regions of the tree.
        let t = corpus::kink(false);
        let cfg = closure_config(&t, &[1], &empty(), &empty()).unwrap();
        let circles = cfg.circles();
        assert_eq!(circles.len(), 2);
        let ccw = cfg.orientations().unwrap();
        // The two circles share the crossing site; one bounds the other side
        // of the shared region, so orientations must differ when nested and
        // agree when side by side.  Either way the computation must commit.
        assert_eq!(ccw.len(), 2);
    }
}
