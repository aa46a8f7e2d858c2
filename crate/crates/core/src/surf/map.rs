//! Rotation systems: darts, an opposite involution and a rotation permutation.

use std::collections::VecDeque;

use super::SurfError;

pub const NONE: usize = usize::MAX;

/// Read access to a (possibly sparse) rotation system.
///
/// Dead darts report `NONE` from `rot`. Colors are optional per-dart tags that
/// isomorphisms must preserve.
pub trait DartMap {
    fn dart_bound(&self) -> usize;
    fn opp(&self, d: usize) -> usize;
    fn rot(&self, d: usize) -> usize;
    fn color(&self, _d: usize) -> u64 {
        0
    }
    fn alive(&self, d: usize) -> bool {
        d < self.dart_bound() && self.rot(d) != NONE
    }
    fn darts(&self) -> Vec<usize> {
        (0..self.dart_bound()).filter(|&d| self.alive(d)).collect()
    }
    /// Face successor: leave along `d`, turn to the next dart at the far vertex.
    fn face_next(&self, d: usize) -> usize {
        self.rot(self.opp(d))
    }
}

/// Orbits of a permutation restricted to alive darts, each starting at its
/// smallest dart, listed by that dart.
pub fn orbits(m: &impl DartMap, step: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let n = m.dart_bound();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for d in 0..n {
        if seen[d] || !m.alive(d) {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = d;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = step(x);
        }
        out.push(cyc);
    }
    out
}

pub fn vertex_orbits(m: &impl DartMap) -> Vec<Vec<usize>> {
    orbits(m, |d| m.rot(d))
}

pub fn face_orbits(m: &impl DartMap) -> Vec<Vec<usize>> {
    orbits(m, |d| m.face_next(d))
}

/// Number of connected components of the underlying graph.
pub fn components(m: &impl DartMap) -> usize {
    let n = m.dart_bound();
    let mut seen = vec![false; n];
    let mut count = 0;
    for d in 0..n {
        if seen[d] || !m.alive(d) {
            continue;
        }
        count += 1;
        let mut stack = vec![d];
        seen[d] = true;
        while let Some(x) = stack.pop() {
            for y in [m.opp(x), m.rot(x)] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

/// BFS relabeling from `anchor`; returns labels indexed by dart.
fn bfs_labels(m: &impl DartMap, anchor: usize) -> (Vec<usize>, Vec<usize>) {
    let mut label = vec![NONE; m.dart_bound()];
    let mut order = vec![anchor];
    label[anchor] = 0;
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        i += 1;
        for y in [m.opp(d), m.rot(d)] {
            if label[y] == NONE {
                label[y] = order.len();
                order.push(y);
            }
        }
    }
    (label, order)
}

/// Code of the map as seen from `anchor`: per BFS position, (opp, rot, color).
fn code_from(m: &impl DartMap, anchor: usize) -> Vec<(usize, usize, u64)> {
    let (label, order) = bfs_labels(m, anchor);
    order
        .iter()
        .map(|&d| (label[m.opp(d)], label[m.rot(d)], m.color(d)))
        .collect()
}

/// Canonical code: lexicographically least anchored code. Two connected maps
/// are isomorphic (rotation, opposite and colors preserved) iff codes agree.
pub fn canonical_code(m: &impl DartMap) -> Vec<(usize, usize, u64)> {
    m.darts()
        .into_iter()
        .map(|a| code_from(m, a))
        .min()
        .unwrap_or_default()
}

/// Tries to extend `a0 ↦ b0` to an isomorphism of connected maps.
pub fn extend_iso(a: &impl DartMap, b: &impl DartMap, a0: usize, b0: usize) -> Option<Vec<usize>> {
    let mut fwd = vec![NONE; a.dart_bound()];
    let mut back = vec![NONE; b.dart_bound()];
    let mut queue = VecDeque::new();
    let bind = |x: usize, y: usize, fwd: &mut Vec<usize>, back: &mut Vec<usize>, q: &mut VecDeque<usize>| -> bool {
        if fwd[x] == NONE && back[y] == NONE {
            if a.color(x) != b.color(y) {
                return false;
            }
            fwd[x] = y;
            back[y] = x;
            q.push_back(x);
            true
        } else {
            fwd[x] == y && back[y] == x
        }
    };
    if !bind(a0, b0, &mut fwd, &mut back, &mut queue) {
        return None;
    }
    while let Some(x) = queue.pop_front() {
        let y = fwd[x];
        if !bind(a.opp(x), b.opp(y), &mut fwd, &mut back, &mut queue) {
            return None;
        }
        if !bind(a.rot(x), b.rot(y), &mut fwd, &mut back, &mut queue) {
            return None;
        }
    }
    let a_alive = a.darts();
    if a_alive.iter().any(|&d| fwd[d] == NONE) || b.darts().len() != a_alive.len() {
        return None;
    }
    Some(fwd)
}

/// All isomorphisms from `a` to `b` (connected maps), as dart maps indexed by
/// `a`'s darts, in ascending order of the image of `a`'s first dart.
pub fn isomorphisms(a: &impl DartMap, b: &impl DartMap) -> Vec<Vec<usize>> {
    let ad = a.darts();
    let bd = b.darts();
    if ad.len() != bd.len() || ad.is_empty() {
        return Vec::new();
    }
    let a0 = ad[0];
    bd.iter().filter_map(|&b0| extend_iso(a, b, a0, b0)).collect()
}

pub fn is_isomorphic(a: &impl DartMap, b: &impl DartMap) -> bool {
    let ad = a.darts();
    let bd = b.darts();
    if ad.len() != bd.len() {
        return false;
    }
    if ad.is_empty() {
        return true;
    }
    // anchor at a dart of the rarest color to keep the search small
    let mut best = ad[0];
    let mut best_count = usize::MAX;
    for &d in &ad {
        let c = a.color(d);
        let cnt = ad.iter().filter(|&&x| a.color(x) == c).count();
        if cnt < best_count {
            best_count = cnt;
            best = d;
        }
    }
    let c = a.color(best);
    bd.iter()
        .filter(|&&y| b.color(y) == c)
        .any(|&y| extend_iso(a, b, best, y).is_some())
}

/// A closed oriented surface given as a dense rotation system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombSurface {
    opp: Vec<usize>,
    rot: Vec<usize>,
}

impl DartMap for CombSurface {
    fn dart_bound(&self) -> usize {
        self.opp.len()
    }
    fn opp(&self, d: usize) -> usize {
        self.opp[d]
    }
    fn rot(&self, d: usize) -> usize {
        self.rot[d]
    }
}

fn check_perm(p: &[usize]) -> Result<(), SurfError> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return Err(SurfError::NonPermutation);
        }
        seen[x] = true;
    }
    Ok(())
}

impl CombSurface {
    pub fn new(opp: Vec<usize>, rot: Vec<usize>) -> Result<Self, SurfError> {
        if opp.len() != rot.len() {
            return Err(SurfError::NonPermutation);
        }
        if opp.is_empty() || opp.len() % 2 == 1 {
            return Err(SurfError::OddDartCount(opp.len()));
        }
        check_perm(&opp)?;
        check_perm(&rot)?;
        for (d, &o) in opp.iter().enumerate() {
            if o == d {
                return Err(SurfError::FixedPointInOpposite(d));
            }
            if opp[o] != d {
                return Err(SurfError::NonPermutation);
            }
        }
        let s = CombSurface { opp, rot };
        if components(&s) != 1 {
            return Err(SurfError::Disconnected);
        }
        Ok(s)
    }

    pub(crate) fn from_parts_unchecked(opp: Vec<usize>, rot: Vec<usize>) -> Self {
        CombSurface { opp, rot }
    }

    pub fn num_darts(&self) -> usize {
        self.opp.len()
    }

    pub fn opp_perm(&self) -> &[usize] {
        &self.opp
    }

    pub fn rot_perm(&self) -> &[usize] {
        &self.rot
    }

    pub fn vertices(&self) -> Vec<Vec<usize>> {
        vertex_orbits(self)
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        face_orbits(self)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices().len(), self.num_darts() / 2, self.faces().len())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f) = self.counts();
        v as i64 - e as i64 + f as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// Vertex index of each dart.
    pub fn vertex_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_darts()];
        for (i, orb) in self.vertices().iter().enumerate() {
            for &d in orb {
                out[d] = i;
            }
        }
        out
    }

    /// Face index of each dart.
    pub fn face_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_darts()];
        for (i, orb) in self.faces().iter().enumerate() {
            for &d in orb {
                out[d] = i;
            }
        }
        out
    }

    /// The dual map: same darts, rotation replaced by the face permutation.
    pub fn dual(&self) -> CombSurface {
        let rot = (0..self.num_darts()).map(|d| self.face_next(d)).collect();
        CombSurface { opp: self.opp.clone(), rot }
    }

    /// Relabels darts by `perm` (old -> new).
    pub fn relabel(&self, perm: &[usize]) -> CombSurface {
        let n = self.num_darts();
        let mut opp = vec![0; n];
        let mut rot = vec![0; n];
        for d in 0..n {
            opp[perm[d]] = perm[self.opp[d]];
            rot[perm[d]] = perm[self.rot[d]];
        }
        CombSurface { opp, rot }
    }

    /// Canonical relabeling: darts renumbered in BFS order from the anchor
    /// giving the least code.
    pub fn canonical(&self) -> CombSurface {
        let best = self
            .darts()
            .into_iter()
            .min_by_key(|&a| code_from(self, a))
            .expect("nonempty surface");
        let (label, _) = bfs_labels(self, best);
        self.relabel(&label)
    }

    /// Parses `dart <i>: opp=<j> rot=<k>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SurfError> {
        let mut entries: Vec<Option<(usize, usize)>> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() || line.starts_with("format:") {
                continue;
            }
            let bad = || SurfError::Parse(format!("line {}: '{}'", ln + 1, line));
            let rest = line.strip_prefix("dart").ok_or_else(bad)?;
            let (id, rest) = rest.split_once(':').ok_or_else(bad)?;
            let id: usize = id.trim().parse().map_err(|_| bad())?;
            let mut opp = None;
            let mut rot = None;
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("opp=") {
                    opp = Some(v.parse::<usize>().map_err(|_| bad())?);
                } else if let Some(v) = tok.strip_prefix("rot=") {
                    rot = Some(v.parse::<usize>().map_err(|_| bad())?);
                } else {
                    return Err(bad());
                }
            }
            let (opp, rot) = (opp.ok_or_else(bad)?, rot.ok_or_else(bad)?);
            if id >= entries.len() {
                entries.resize(id + 1, None);
            }
            if entries[id].is_some() {
                return Err(SurfError::Parse(format!("duplicate dart {id}")));
            }
            entries[id] = Some((opp, rot));
        }
        let mut opp = Vec::with_capacity(entries.len());
        let mut rot = Vec::with_capacity(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            let (o, r) = e.ok_or_else(|| SurfError::Parse(format!("missing dart {i}")))?;
            opp.push(o);
            rot.push(r);
        }
        CombSurface::new(opp, rot)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for d in 0..self.num_darts() {
            s.push_str(&format!("dart {}: opp={} rot={}\n", d, self.opp[d], self.rot[d]));
        }
        s
    }
}

/// A map with per-dart colors layered on top, for colored isomorphism tests.
pub struct Colored<'a, M: DartMap> {
    pub map: &'a M,
    pub colors: &'a [u64],
}

impl<M: DartMap> DartMap for Colored<'_, M> {
    fn dart_bound(&self) -> usize {
        self.map.dart_bound()
    }
    fn opp(&self, d: usize) -> usize {
        self.map.opp(d)
    }
    fn rot(&self, d: usize) -> usize {
        self.map.rot(d)
    }
    fn color(&self, d: usize) -> u64 {
        self.colors[d]
    }
}
