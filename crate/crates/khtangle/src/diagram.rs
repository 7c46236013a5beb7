//! Tangle diagrams as combinatorial rotation systems.
//!
//! A diagram of an `(2m, 2n)`-tangle is a 4-valent graph in the square:
//! crossings are vertices carrying the counterclockwise cyclic order of their
//! four edge-ends, starting at the incoming under-strand; boundary points sit
//! on the two vertical sides, numbered bottom-to-top.  Planarity of the
//! rotation system is checked by face tracing (Euler characteristic 2 per
//! connected component).
//!
//! Smoothing convention, with slots `0..4` counterclockwise from the incoming
//! under-strand (see `docs/format.md` for the full picture):
//!
//! ```text
//!   3   2        3   2        3 | 2
//!    \ /          ‿                     0-smoothing joins 0-1 and 2-3,
//!     /                |   |    1-smoothing joins 0-3 and 1-2.
//!    / \          ⌒
//!   0   1        0   1        0 | 1
//! ```
//!
//! A crossing is positive when the over-strand enters at slot 3 and negative
//! when it enters at slot 1 (components oriented per the `component` walks).

use crate::error::{KhError, Result};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Where an edge-end is attached.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Att {
    /// Slot `s` (counterclockwise, 0 = incoming under-strand) of crossing `c`.
    Cross(usize, usize),
    /// Left boundary position (0-based; position `i` is point `i+1`).
    Left(usize),
    /// Right boundary position (0-based).
    Right(usize),
}

#[derive(Clone, Debug)]
pub struct TangleDiagram {
    m: usize,
    n: usize,
    edge_names: Vec<String>,
    /// Per crossing: edge ids in counterclockwise order, slot 0 = incoming under.
    crossings: Vec<[usize; 4]>,
    left_boundary: Vec<usize>,
    right_boundary: Vec<usize>,
    /// Ordered edge walks, one per component (direction of travel).
    orientations: Vec<Vec<usize>>,
    // Derived on validation:
    attachments: Vec<Vec<Att>>,
    /// Per edge: (tail, head) attachments in the direction of travel; `None`
    /// for closed components consisting of a single free loop edge.
    edge_dir: Vec<Option<(Att, Att)>>,
    /// Component (walk) index of each edge.
    comp_of_edge: Vec<usize>,
    /// Whether the component's direction was ambiguous (it never runs under a
    /// crossing, so both directions are consistent).  Such components may be
    /// reversed when gluing.
    comp_flexible: Vec<bool>,
    signs: Vec<i8>,
}

impl TangleDiagram {
    pub fn new(
        m: usize,
        n: usize,
        edge_names: Vec<String>,
        crossings: Vec<[usize; 4]>,
        left_boundary: Vec<usize>,
        right_boundary: Vec<usize>,
        orientations: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut d = TangleDiagram {
            m,
            n,
            edge_names,
            crossings,
            left_boundary,
            right_boundary,
            orientations,
            attachments: Vec::new(),
            edge_dir: Vec::new(),
            comp_of_edge: Vec::new(),
            comp_flexible: Vec::new(),
            signs: Vec::new(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edge_names.len()
    }
    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }
    pub fn left_boundary(&self) -> &[usize] {
        &self.left_boundary
    }
    pub fn right_boundary(&self) -> &[usize] {
        &self.right_boundary
    }
    pub fn orientations(&self) -> &[Vec<usize>] {
        &self.orientations
    }
    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }
    pub fn attachments(&self) -> &[Vec<Att>] {
        &self.attachments
    }
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// (N_+, N_-): counts of positive and negative crossings.
    pub fn writhe_counts(&self) -> (usize, usize) {
        let p = self.signs.iter().filter(|&&s| s > 0).count();
        (p, self.signs.len() - p)
    }

    /// Same diagram with the crossing order permuted: new crossing `i` is old
    /// crossing `perm[i]`.
    pub fn reorder_crossings(&self, perm: &[usize]) -> Result<TangleDiagram> {
        let nc = self.crossings.len();
        let mut seen = vec![false; nc];
        if perm.len() != nc || perm.iter().any(|&p| p >= nc || std::mem::replace(&mut seen[p], true))
        {
            return Err(KhError::InvalidDiagram(format!(
                "not a permutation of 0..{nc}: {perm:?}"
            )));
        }
        let crossings = perm.iter().map(|&p| self.crossings[p]).collect();
        TangleDiagram::new(
            self.m,
            self.n,
            self.edge_names.clone(),
            crossings,
            self.left_boundary.clone(),
            self.right_boundary.clone(),
            self.orientations.clone(),
        )
    }

    fn validate(&mut self) -> Result<()> {
        let ne = self.edge_names.len();
        if self.left_boundary.len() != 2 * self.m {
            return Err(KhError::BoundaryMismatch(format!(
                "left boundary has {} edges, expected {}",
                self.left_boundary.len(),
                2 * self.m
            )));
        }
        if self.right_boundary.len() != 2 * self.n {
            return Err(KhError::BoundaryMismatch(format!(
                "right boundary has {} edges, expected {}",
                self.right_boundary.len(),
                2 * self.n
            )));
        }
        let check = |e: usize| -> Result<()> {
            if e >= ne {
                return Err(KhError::InvalidDiagram(format!("edge id {e} out of range")));
            }
            Ok(())
        };
        // Attachment lists, in scan order: crossings (slot order), then left
        // boundary bottom-to-top, then right boundary bottom-to-top.
        let mut atts: Vec<Vec<Att>> = vec![Vec::new(); ne];
        for (c, cr) in self.crossings.iter().enumerate() {
            for (s, &e) in cr.iter().enumerate() {
                check(e)?;
                atts[e].push(Att::Cross(c, s));
            }
        }
        for (i, &e) in self.left_boundary.iter().enumerate() {
            check(e)?;
            atts[e].push(Att::Left(i));
        }
        for (i, &e) in self.right_boundary.iter().enumerate() {
            check(e)?;
            atts[e].push(Att::Right(i));
        }
        for (e, a) in atts.iter().enumerate() {
            if a.len() != 0 && a.len() != 2 {
                return Err(KhError::InvalidDiagram(format!(
                    "edge {} has {} end attachments, expected 0 or 2",
                    self.edge_names[e],
                    a.len()
                )));
            }
        }
        self.attachments = atts;
        self.orient_walks()?;
        self.compute_signs()?;
        self.check_planar()?;
        Ok(())
    }

    /// Validate the orientation walks and derive per-edge directions.
    fn orient_walks(&mut self) -> Result<()> {
        let ne = self.edge_names.len();
        let mut used = vec![false; ne];
        let mut dir: Vec<Option<(Att, Att)>> = vec![None; ne];
        let mut comp_of_edge = vec![0usize; ne];
        let mut comp_flexible = vec![false; self.orientations.len()];
        for (w, walk) in self.orientations.iter().enumerate() {
            if walk.is_empty() {
                return Err(KhError::Unoriented("empty component walk".into()));
            }
            for &e in walk {
                if e >= ne {
                    return Err(KhError::InvalidDiagram(format!("edge id {e} out of range")));
                }
                if std::mem::replace(&mut used[e], true) {
                    return Err(KhError::Unoriented(format!(
                        "edge {} appears in two component walks",
                        self.edge_names[e]
                    )));
                }
                comp_of_edge[e] = w;
            }
            if walk.len() == 1 && self.attachments[walk[0]].is_empty() {
                comp_flexible[w] = true;
                continue; // free loop; no direction needed
            }
            if walk.iter().any(|&e| self.attachments[e].is_empty()) {
                return Err(KhError::Unoriented(
                    "free loop edge inside a multi-edge walk".into(),
                ));
            }
            // Try the two starting directions of the first edge; keep those
            // that chain consistently and respect the incoming-under slots.
            let mut ok_dirs = Vec::new();
            for start in 0..2 {
                if let Some(d) = self.try_walk(walk, start) {
                    ok_dirs.push(d);
                }
            }
            let chosen = match ok_dirs.len() {
                0 => {
                    return Err(KhError::Unoriented(format!(
                        "component walk starting at edge {} is not a consistent strand",
                        self.edge_names[walk[0]]
                    )))
                }
                // Ambiguous when the component never runs under a crossing
                // (the reversed walk is also consistent); the documented
                // tie-break is "first edge runs from its first-listed
                // attachment to its second".
                k => {
                    let rev: Vec<usize> = walk.iter().rev().copied().collect();
                    comp_flexible[w] =
                        k == 2 || (0..2).any(|s| self.try_walk(&rev, s).is_some());
                    ok_dirs.swap_remove(0)
                }
            };
            for (e, d) in walk.iter().zip(chosen) {
                dir[*e] = Some(d);
            }
        }
        if let Some(e) = used.iter().position(|&u| !u) {
            return Err(KhError::Unoriented(format!(
                "edge {} belongs to no component walk",
                self.edge_names[e]
            )));
        }
        self.edge_dir = dir;
        self.comp_of_edge = comp_of_edge;
        self.comp_flexible = comp_flexible;
        Ok(())
    }

    /// Attempt to traverse `walk` with the first edge leaving attachment
    /// `start`; returns the (tail, head) pair per edge on success.
    fn try_walk(&self, walk: &[usize], start: usize) -> Option<Vec<(Att, Att)>> {
        let mut dirs = Vec::with_capacity(walk.len());
        let mut tail = self.attachments[walk[0]][start];
        for (i, &e) in walk.iter().enumerate() {
            let ends = &self.attachments[e];
            let head = if i == 0 {
                ends[1 - start]
            } else if ends[0] == tail {
                ends[1]
            } else if ends[1] == tail {
                ends[0]
            } else {
                return None;
            };
            dirs.push((tail, head));
            let last = i + 1 == walk.len();
            match head {
                Att::Cross(c, s) => {
                    let opp = Att::Cross(c, (s + 2) % 4);
                    let next = walk[if last { 0 } else { i + 1 }];
                    if !self.attachments[next].contains(&opp) {
                        return None;
                    }
                    tail = opp;
                }
                Att::Left(_) | Att::Right(_) => {
                    if !last {
                        return None;
                    }
                    // open component: the first edge must also start on the boundary
                    match dirs[0].0 {
                        Att::Left(_) | Att::Right(_) => {}
                        Att::Cross(..) => return None,
                    }
                }
            }
        }
        // Closed components: the wrap-around tail must match the chosen start.
        if let Att::Cross(..) = dirs[dirs.len() - 1].1 {
            if tail != dirs[0].0 {
                return None;
            }
        }
        // Incoming-under constraint: slot 0 flows in, slot 2 flows out.
        for &(t, h) in &dirs {
            if let Att::Cross(_, 0) = t {
                return None;
            }
            if let Att::Cross(_, 2) = h {
                return None;
            }
        }
        Some(dirs)
    }

    fn compute_signs(&mut self) -> Result<()> {
        let mut signs = Vec::with_capacity(self.crossings.len());
        for (c, cr) in self.crossings.iter().enumerate() {
            let heads_at = |slot: usize| -> bool {
                let e = cr[slot];
                matches!(self.edge_dir[e], Some((_, h)) if h == Att::Cross(c, slot))
            };
            // Under-strand flows slot 0 -> slot 2 by construction; the over
            // strand enters at slot 1 (negative) or slot 3 (positive).
            if !heads_at(0) {
                return Err(KhError::Unoriented(format!(
                    "crossing {c}: slot 0 edge does not flow into the crossing"
                )));
            }
            let sign = match (heads_at(1), heads_at(3)) {
                (true, false) => -1,
                (false, true) => 1,
                _ => {
                    return Err(KhError::Unoriented(format!(
                        "crossing {c}: over-strand direction inconsistent"
                    )))
                }
            };
            signs.push(sign);
        }
        self.signs = signs;
        Ok(())
    }

    /// Planarity of the rotation system: every connected component of the
    /// diagram graph (crossings plus a single vertex for the square boundary)
    /// must satisfy V - E + F = 2 under face tracing.
    fn check_planar(&self) -> Result<()> {
        let nc = self.crossings.len();
        let has_bd = self.m > 0 || self.n > 0;
        let nv = nc + if has_bd { 1 } else { 0 };
        let bd_vertex = nc;
        // Rotation lists: at each vertex, outgoing darts (edge, att index) in
        // counterclockwise order.  Around the boundary vertex the order is the
        // reverse of the counterclockwise walk around the square: left points
        // bottom-to-top, then right points top-to-bottom.
        let mut att_count: HashMap<usize, usize> = HashMap::new();
        let mut att_index: HashMap<(usize, usize), (usize, usize)> = HashMap::new(); // (edge, att idx) -> (vertex, rot pos)
        let mut rot: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        let mut push = |v: usize, e: usize, rot: &mut Vec<Vec<(usize, usize)>>| {
            let k = att_count.entry(e).or_insert(0);
            let idx = *k;
            *k += 1;
            att_index.insert((e, idx), (v, rot[v].len()));
            rot[v].push((e, idx));
        };
        // Scan order must match `validate` so attachment indices agree.
        for (c, cr) in self.crossings.iter().enumerate() {
            for &e in cr.iter() {
                push(c, e, &mut rot);
            }
        }
        // Attachment indices for boundary edges were assigned scanning left
        // bottom-to-top then right bottom-to-top; replicate that numbering
        // while inserting into the rotation in the boundary-vertex order.
        let mut bd_att: Vec<(usize, usize)> = Vec::new();
        for &e in self.left_boundary.iter() {
            let k = att_count.entry(e).or_insert(0);
            bd_att.push((e, *k));
            *k += 1;
        }
        let mut right_att: Vec<(usize, usize)> = Vec::new();
        for &e in self.right_boundary.iter() {
            let k = att_count.entry(e).or_insert(0);
            right_att.push((e, *k));
            *k += 1;
        }
        bd_att.extend(right_att.into_iter().rev());
        for da in bd_att {
            att_index.insert(da, (bd_vertex, rot[bd_vertex].len()));
            rot[bd_vertex].push(da);
        }

        // Union-find on vertices for connected components.
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut graph_edges: Vec<usize> = Vec::new(); // edges with both ends attached
        for (e, a) in self.attachments.iter().enumerate() {
            if a.len() == 2 {
                graph_edges.push(e);
                let v0 = att_index[&(e, 0)].0;
                let v1 = att_index[&(e, 1)].0;
                let (r0, r1) = (find(&mut parent, v0), find(&mut parent, v1));
                if r0 != r1 {
                    parent[r0] = r1;
                }
            }
        }
        // Face tracing: darts are (edge, tail att).  The next dart of a face
        // is the clockwise-next outgoing dart at the head vertex.
        let mut visited: HashMap<(usize, usize), bool> = HashMap::new();
        let mut faces_of: HashMap<usize, usize> = HashMap::new();
        let mut trace_sample: HashMap<usize, Vec<String>> = HashMap::new();
        for &e in &graph_edges {
            for t in 0..2 {
                if visited.get(&(e, t)).copied().unwrap_or(false) {
                    continue;
                }
                let comp = find(&mut parent, att_index[&(e, t)].0);
                let mut d = (e, t);
                let mut walk = Vec::new();
                loop {
                    visited.insert(d, true);
                    walk.push(self.edge_names[d.0].clone());
                    let head = (d.0, 1 - d.1);
                    let (v, pos) = att_index[&head];
                    let len = rot[v].len();
                    d = rot[v][(pos + len - 1) % len];
                    if visited.get(&d).copied().unwrap_or(false) {
                        break;
                    }
                }
                *faces_of.entry(comp).or_insert(0) += 1;
                trace_sample.entry(comp).or_insert(walk);
            }
        }
        // Per-component Euler characteristic.
        let mut vcount: HashMap<usize, usize> = HashMap::new();
        let mut ecount: HashMap<usize, usize> = HashMap::new();
        for v in 0..nv {
            if rot[v].is_empty() && v < nc {
                return Err(KhError::InvalidDiagram(format!("crossing {v} has no edges")));
            }
            let r = find(&mut parent, v);
            *vcount.entry(r).or_insert(0) += 1;
        }
        for &e in &graph_edges {
            let r = find(&mut parent, att_index[&(e, 0)].0);
            *ecount.entry(r).or_insert(0) += 1;
        }
        for (&comp, &v) in &vcount {
            let e = ecount.get(&comp).copied().unwrap_or(0);
            if e == 0 {
                continue; // isolated boundary vertex with no boundary edges
            }
            let f = faces_of.get(&comp).copied().unwrap_or(0);
            if v + f != e + 2 {
                let sample = trace_sample
                    .get(&comp)
                    .map(|w| w.join(" "))
                    .unwrap_or_default();
                return Err(KhError::NonPlanar(format!(
                    "component has V={v} E={e} F={f} (V-E+F={}, expected 2); \
                     a traced face runs through edges: {sample}",
                    v as i64 - e as i64 + f as i64
                )));
            }
        }
        Ok(())
    }

    /// Serialize in the text format accepted by `parse`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "left {}", 2 * self.m);
        let _ = writeln!(s, "right {}", 2 * self.n);
        for (c, cr) in self.crossings.iter().enumerate() {
            let _ = writeln!(
                s,
                "crossing x{} {} {} {} {}",
                c + 1,
                self.edge_names[cr[0]],
                self.edge_names[cr[1]],
                self.edge_names[cr[2]],
                self.edge_names[cr[3]],
            );
        }
        if !self.left_boundary.is_empty() {
            let names: Vec<_> = self
                .left_boundary
                .iter()
                .map(|&e| self.edge_names[e].as_str())
                .collect();
            let _ = writeln!(s, "left_boundary {}", names.join(" "));
        }
        if !self.right_boundary.is_empty() {
            let names: Vec<_> = self
                .right_boundary
                .iter()
                .map(|&e| self.edge_names[e].as_str())
                .collect();
            let _ = writeln!(s, "right_boundary {}", names.join(" "));
        }
        for walk in &self.orientations {
            let names: Vec<_> = walk.iter().map(|&e| self.edge_names[e].as_str()).collect();
            let _ = writeln!(s, "component {}", names.join(" "));
        }
        s
    }

    /// Parse the text format; see `docs/format.md` for the grammar.
    pub fn parse(text: &str) -> Result<TangleDiagram> {
        let mut left: Option<usize> = None;
        let mut right: Option<usize> = None;
        let mut names: Vec<String> = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut intern = |tok: &str, names: &mut Vec<String>| -> usize {
            *ids.entry(tok.to_string()).or_insert_with(|| {
                names.push(tok.to_string());
                names.len() - 1
            })
        };
        let mut crossings = Vec::new();
        let mut left_boundary = Vec::new();
        let mut right_boundary = Vec::new();
        let mut orientations = Vec::new();
        let perr = |line: usize, msg: &str| KhError::Parse {
            line,
            msg: msg.to_string(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let key = toks.next().unwrap();
            let rest: Vec<&str> = toks.collect();
            match key {
                "left" | "right" => {
                    let v: usize = rest
                        .first()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| perr(line_no, "expected a number"))?;
                    if v % 2 != 0 {
                        return Err(perr(line_no, "boundary point count must be even"));
                    }
                    if key == "left" {
                        left = Some(v / 2);
                    } else {
                        right = Some(v / 2);
                    }
                }
                "crossing" => {
                    if rest.len() != 5 {
                        return Err(perr(
                            line_no,
                            "crossing takes a name and four edge identifiers",
                        ));
                    }
                    let e: Vec<usize> = rest[1..]
                        .iter()
                        .map(|t| intern(t, &mut names))
                        .collect();
                    crossings.push([e[0], e[1], e[2], e[3]]);
                }
                "left_boundary" => {
                    left_boundary = rest.iter().map(|t| intern(t, &mut names)).collect();
                }
                "right_boundary" => {
                    right_boundary = rest.iter().map(|t| intern(t, &mut names)).collect();
                }
                "component" => {
                    if rest.is_empty() {
                        return Err(perr(line_no, "component needs at least one edge"));
                    }
                    orientations.push(rest.iter().map(|t| intern(t, &mut names)).collect());
                }
                other => {
                    return Err(perr(line_no, &format!("unknown directive `{other}`")));
                }
            }
        }
        let m = left.ok_or_else(|| perr(0, "missing `left` directive"))?;
        let n = right.ok_or_else(|| perr(0, "missing `right` directive"))?;
        TangleDiagram::new(
            m,
            n,
            names,
            crossings,
            left_boundary,
            right_boundary,
            orientations,
        )
    }
}

/// Glue the right boundary of `t1` to the left boundary of `t2`.
///
/// Returns the composite along with edge maps (old edge id -> new edge id)
/// for both factors.  Crossing order is `t1`'s crossings then `t2`'s.
pub fn compose_tangles(
    t1: &TangleDiagram,
    t2: &TangleDiagram,
) -> Result<(TangleDiagram, Vec<usize>, Vec<usize>)> {
    if t1.n != t2.m {
        return Err(KhError::BoundaryMismatch(format!(
            "cannot glue: right boundary 2n={} vs left boundary 2m={}",
            2 * t1.n,
            2 * t2.m
        )));
    }
    let ne1 = t1.edge_names.len();
    let ne2 = t2.edge_names.len();
    // Union-find over the disjoint edge sets; fuse at the shared boundary.
    let mut parent: Vec<usize> = (0..ne1 + ne2).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for i in 0..2 * t1.n {
        let a = t1.right_boundary[i];
        let b = ne1 + t2.left_boundary[i];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }

    // Orientations must run consistently through each fused junction: one of
    // the two old edges ends there and the other starts.  Components whose
    // direction was ambiguous in a factor may be reversed wholesale; solve for
    // the reversals with a parity union-find (node 0 is "not reversed").
    let w1 = t1.orientations.len();
    let w2 = t2.orientations.len();
    let mut pdsu: Vec<(usize, bool)> = (0..1 + w1 + w2).map(|x| (x, false)).collect();
    fn pfind(p: &mut Vec<(usize, bool)>, x: usize) -> (usize, bool) {
        let (px, rx) = p[x];
        if px == x {
            return (x, false);
        }
        let (root, pr) = pfind(p, px);
        p[x] = (root, rx ^ pr);
        (root, rx ^ pr)
    }
    let punion = |p: &mut Vec<(usize, bool)>, x: usize, y: usize, d: bool| -> bool {
        let (rx, px) = pfind(p, x);
        let (ry, py) = pfind(p, y);
        if rx == ry {
            px ^ py == d
        } else {
            p[rx] = (ry, px ^ py ^ d);
            true
        }
    };
    for (w, &flex) in t1.comp_flexible.iter().enumerate() {
        if !flex {
            punion(&mut pdsu, 0, 1 + w, false);
        }
    }
    for (w, &flex) in t2.comp_flexible.iter().enumerate() {
        if !flex {
            punion(&mut pdsu, 0, 1 + w1 + w, false);
        }
    }
    for i in 0..2 * t1.n {
        let ea = t1.right_boundary[i];
        let eb = t2.left_boundary[i];
        let a_head = matches!(t1.edge_dir[ea], Some((_, h)) if h == Att::Right(i));
        let b_tail = matches!(t2.edge_dir[eb], Some((t, _)) if t == Att::Left(i));
        let ok = punion(
            &mut pdsu,
            1 + t1.comp_of_edge[ea],
            1 + w1 + t2.comp_of_edge[eb],
            a_head ^ b_tail,
        );
        if !ok {
            return Err(KhError::Unoriented(format!(
                "incompatible orientations at glued boundary position {}",
                i + 1
            )));
        }
    }
    let flip1: Vec<bool> = (0..w1).map(|w| pfind(&mut pdsu, 1 + w).1).collect();
    let flip2: Vec<bool> = (0..w2).map(|w| pfind(&mut pdsu, 1 + w1 + w).1).collect();
    let dir1: Vec<Option<(Att, Att)>> = t1
        .edge_dir
        .iter()
        .enumerate()
        .map(|(e, d)| d.map(|(t, h)| if flip1[t1.comp_of_edge[e]] { (h, t) } else { (t, h) }))
        .collect();
    let dir2: Vec<Option<(Att, Att)>> = t2
        .edge_dir
        .iter()
        .enumerate()
        .map(|(e, d)| d.map(|(t, h)| if flip2[t2.comp_of_edge[e]] { (h, t) } else { (t, h) }))
        .collect();
    // New edge ids by first appearance.
    let mut class_id: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut map = vec![0usize; ne1 + ne2];
    for old in 0..ne1 + ne2 {
        let r = find(&mut parent, old);
        let id = *class_id.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        map[old] = id;
        members[id].push(old);
    }
    let old_name = |old: usize| -> String {
        if old < ne1 {
            format!("a.{}", t1.edge_names[old])
        } else {
            format!("b.{}", t2.edge_names[old - ne1])
        }
    };
    let edge_names: Vec<String> = members
        .iter()
        .map(|ms| {
            ms.iter()
                .map(|&o| old_name(o))
                .collect::<Vec<_>>()
                .join("~")
        })
        .collect();
    let mut crossings: Vec<[usize; 4]> = Vec::new();
    for cr in &t1.crossings {
        crossings.push([map[cr[0]], map[cr[1]], map[cr[2]], map[cr[3]]]);
    }
    for cr in &t2.crossings {
        crossings.push([
            map[ne1 + cr[0]],
            map[ne1 + cr[1]],
            map[ne1 + cr[2]],
            map[ne1 + cr[3]],
        ]);
    }
    let left_boundary: Vec<usize> = t1.left_boundary.iter().map(|&e| map[e]).collect();
    let right_boundary: Vec<usize> = t2.right_boundary.iter().map(|&e| map[ne1 + e]).collect();

    // Direction of each new edge, inherited from constituents.  A directed old
    // edge whose head (resp. tail) is a fused boundary attachment continues
    // into the next old edge; all constituents must agree.
    let nc1 = t1.crossings.len();
    let map_att = |piece: usize, a: Att| -> Option<Att> {
        match (piece, a) {
            (0, Att::Cross(c, s)) => Some(Att::Cross(c, s)),
            (0, Att::Left(i)) => Some(Att::Left(i)),
            (0, Att::Right(_)) => None, // fused away
            (1, Att::Cross(c, s)) => Some(Att::Cross(nc1 + c, s)),
            (1, Att::Left(_)) => None,
            (1, Att::Right(i)) => Some(Att::Right(i)),
            _ => unreachable!(),
        }
    };
    // For each new edge, reconstruct the chain of old edges and check that the
    // inherited directions are consistent.
    let old_dir = |old: usize| -> Option<(usize, (Att, Att))> {
        if old < ne1 {
            dir1[old].map(|d| (0, d))
        } else {
            dir2[old - ne1].map(|d| (1, d))
        }
    };
    // Connectivity between old edges inside one class: old attachment points
    // at the fused boundary.
    // Key: (boundary position) -> the two old edge occurrences there.
    // An old edge may hit the fused boundary at both ends.
    let mut new_dir_tail_head: Vec<Option<(Att, Att)>> = vec![None; edge_names.len()];
    let mut new_is_free: Vec<bool> = vec![false; edge_names.len()];
    for (id, ms) in members.iter().enumerate() {
        // Gather each member's (tail, head) in old coordinates, if directed.
        let mut free_ends: Vec<Att> = Vec::new(); // mapped surviving attachments
        let mut dir_votes: Vec<(Att, Att)> = Vec::new(); // mapped (tail,head) with fused ends dropped
        let mut any_dir = false;
        for &old in ms {
            let piece = if old < ne1 { 0 } else { 1 };
            match old_dir(old) {
                Some((p, (tl, hd))) => {
                    any_dir = true;
                    let mt = map_att(p, tl);
                    let mh = map_att(p, hd);
                    if let Some(a) = mt {
                        free_ends.push(a);
                    }
                    if let Some(a) = mh {
                        free_ends.push(a);
                    }
                    dir_votes.push((mt.unwrap_or(Att::Left(usize::MAX)), mh.unwrap_or(Att::Left(usize::MAX))));
                }
                None => {
                    // free loop in a factor: stays a free loop (class of one)
                    let _ = piece;
                }
            }
        }
        if !any_dir {
            new_is_free[id] = true;
            continue;
        }
        match free_ends.len() {
            0 => {
                // class closed up into a free loop of the composite
                new_is_free[id] = true;
            }
            2 => {
                // The chain has two surviving ends; decide which is the tail.
                // Walk the chain: the tail is the surviving tail of some
                // member whose mapped tail survived.
                let tails: Vec<Att> = dir_votes
                    .iter()
                    .filter(|(t, _)| *t != Att::Left(usize::MAX))
                    .map(|(t, _)| *t)
                    .collect();
                let heads: Vec<Att> = dir_votes
                    .iter()
                    .filter(|(_, h)| *h != Att::Left(usize::MAX))
                    .map(|(_, h)| *h)
                    .collect();
                if tails.len() != 1 || heads.len() != 1 {
                    return Err(KhError::Unoriented(format!(
                        "incompatible orientations across the glued boundary at edge {}",
                        edge_names[id]
                    )));
                }
                new_dir_tail_head[id] = Some((tails[0], heads[0]));
            }
            _ => {
                return Err(KhError::InvalidDiagram(format!(
                    "edge class {} has {} surviving ends",
                    edge_names[id],
                    free_ends.len()
                )));
            }
        }
    }
    // Rebuild component walks from the new directions.
    let mut succ: HashMap<Att, usize> = HashMap::new(); // tail attachment -> edge
    for (e, d) in new_dir_tail_head.iter().enumerate() {
        if let Some((t, _)) = d {
            succ.insert(*t, e);
        }
    }
    let mut orientations: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; edge_names.len()];
    for e0 in 0..edge_names.len() {
        if used[e0] {
            continue;
        }
        if new_is_free[e0] {
            used[e0] = true;
            orientations.push(vec![e0]);
            continue;
        }
        let Some((tail, _)) = new_dir_tail_head[e0] else {
            return Err(KhError::Unoriented(format!(
                "edge {} has no inherited orientation",
                edge_names[e0]
            )));
        };
        // Walk backwards to the start of the component (boundary tail or wrap).
        let mut start = e0;
        let mut guard = 0;
        loop {
            let (t, _) = new_dir_tail_head[start].unwrap();
            let prev = match t {
                Att::Cross(c, s) => {
                    // predecessor's head is the opposite slot
                    let opp = Att::Cross(c, (s + 2) % 4);
                    new_dir_tail_head
                        .iter()
                        .position(|d| matches!(d, Some((_, h)) if *h == opp))
                }
                _ => None,
            };
            match prev {
                Some(p) if p != e0 => {
                    start = p;
                    guard += 1;
                    if guard > edge_names.len() {
                        return Err(KhError::Unoriented("orientation walk does not close".into()));
                    }
                }
                _ => break,
            }
            let _ = tail;
        }
        let mut walk = Vec::new();
        let mut cur = start;
        loop {
            used[cur] = true;
            walk.push(cur);
            let (_, h) = new_dir_tail_head[cur].unwrap();
            let next = match h {
                Att::Cross(c, s) => succ.get(&Att::Cross(c, (s + 2) % 4)).copied(),
                _ => None,
            };
            match next {
                Some(nx) if !used[nx] => cur = nx,
                _ => break,
            }
        }
        orientations.push(walk);
    }
    let composite = TangleDiagram::new(
        t1.m,
        t2.n,
        edge_names,
        crossings,
        left_boundary,
        right_boundary,
        orientations,
    )?;
    let map1 = map[..ne1].to_vec();
    let map2 = map[ne1..].to_vec();
    Ok((composite, map1, map2))
}
