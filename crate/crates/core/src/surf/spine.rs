//! Spines: embedded graphs whose complement is a single disc.
//!
//! A spine is stored through its own rotation system, which determines the
//! carrier surface up to homeomorphism. Edge `L` owns darts `2L` and `2L+1`;
//! deleted edges leave holes so that labels stay stable under moves.

use std::fmt;

use super::map::{self, CombSurface, DartMap, NONE};
use super::SurfError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpineDiagnostic {
    Empty,
    NotClosedUnderOpposite(usize),
    Disconnected(usize),
    /// The complement has this many boundary cycles instead of one.
    ComplementFaces(usize),
    /// One boundary cycle, but the complement is not a disc.
    ComplementNotDisc { euler: i64, expected: i64 },
    LowValence { vertex: usize, valence: usize },
    SphereCarrier,
}

impl fmt::Display for SpineDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpineDiagnostic::Empty => write!(f, "empty graph"),
            SpineDiagnostic::NotClosedUnderOpposite(d) => {
                write!(f, "dart set not closed under opposite at dart {d}")
            }
            SpineDiagnostic::Disconnected(n) => write!(f, "graph has {n} components"),
            SpineDiagnostic::ComplementFaces(n) => write!(f, "complement has {n} boundary cycles"),
            SpineDiagnostic::ComplementNotDisc { euler, expected } => {
                write!(f, "graph Euler characteristic {euler} + 1 differs from surface {expected}")
            }
            SpineDiagnostic::LowValence { vertex, valence } => {
                write!(f, "vertex v{vertex} has valence {valence}")
            }
            SpineDiagnostic::SphereCarrier => write!(f, "the 2-sphere has no spine"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spine {
    rot: Vec<usize>,
    color: Vec<u64>,
}

impl DartMap for Spine {
    fn dart_bound(&self) -> usize {
        self.rot.len()
    }
    fn opp(&self, d: usize) -> usize {
        d ^ 1
    }
    fn rot(&self, d: usize) -> usize {
        self.rot[d]
    }
    fn color(&self, d: usize) -> u64 {
        self.color[d]
    }
}

impl Spine {
    /// Wraps a rotation on paired darts without validation.
    pub fn from_rot(rot: Vec<usize>) -> Self {
        assert!(rot.len().is_multiple_of(2));
        let color = vec![0; rot.len()];
        Spine { rot, color }
    }

    /// Builds a spine from a surface map, pairing darts as `2L, 2L+1` in
    /// ascending order of first appearance. Fails unless the map is a spine.
    pub fn from_surface(m: &CombSurface) -> Result<Self, SurfError> {
        let s = Self::relabeled_from(m).0;
        s.diagnose().map_err(SurfError::NotASpine)?;
        Ok(s)
    }

    fn relabeled_from(m: &impl DartMap) -> (Self, Vec<usize>) {
        let n = m.dart_bound();
        let mut new_id = vec![NONE; n];
        let mut next = 0;
        for d in m.darts() {
            if new_id[d] == NONE {
                new_id[d] = next;
                new_id[m.opp(d)] = next + 1;
                next += 2;
            }
        }
        let mut rot = vec![NONE; next];
        let mut color = vec![0; next];
        for d in m.darts() {
            rot[new_id[d]] = new_id[m.rot(d)];
            color[new_id[d]] = m.color(d);
        }
        (Spine { rot, color }, new_id)
    }

    /// The subgraph of `carrier` on `darts`, with the induced rotation, and
    /// the carrier-to-spine dart relabeling. No spine conditions are checked.
    pub fn induced_with_map(
        carrier: &CombSurface,
        darts: &[usize],
    ) -> Result<(Self, Vec<usize>), SpineDiagnostic> {
        let n = carrier.num_darts();
        let mut inside = vec![false; n];
        for &d in darts {
            if d < n {
                inside[d] = true;
            }
        }
        if !inside.iter().any(|&b| b) {
            return Err(SpineDiagnostic::Empty);
        }
        for d in 0..n {
            if inside[d] && !inside[carrier.opp(d)] {
                return Err(SpineDiagnostic::NotClosedUnderOpposite(d));
            }
        }
        let mut rot = vec![NONE; n];
        for d in 0..n {
            if inside[d] {
                let mut x = carrier.rot(d);
                while !inside[x] {
                    x = carrier.rot(x);
                }
                rot[d] = x;
            }
        }
        let sub = SparseMap { opp: carrier.opp_perm(), rot: &rot };
        Ok(Self::relabeled_from(&sub))
    }

    pub fn induced(carrier: &CombSurface, darts: &[usize]) -> Result<Self, SpineDiagnostic> {
        Self::induced_with_map(carrier, darts).map(|x| x.0)
    }

    pub fn colors(&self) -> &[u64] {
        &self.color
    }

    pub fn set_edge_color(&mut self, label: usize, c: u64) {
        self.color[2 * label] = c;
        self.color[2 * label + 1] = c;
    }

    pub fn clear_colors(&mut self) {
        self.color.iter_mut().for_each(|c| *c = 0);
    }

    pub fn edge_alive(&self, label: usize) -> bool {
        2 * label < self.rot.len() && self.rot[2 * label] != NONE
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.rot.len() / 2).filter(|&l| self.edge_alive(l)).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    pub fn vertices(&self) -> Vec<Vec<usize>> {
        map::vertex_orbits(self)
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        map::face_orbits(self)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices().len()
    }

    /// Darts around the vertex of `d`, starting at `d`.
    pub fn around(&self, d: usize) -> Vec<usize> {
        let mut out = vec![d];
        let mut x = self.rot[d];
        while x != d {
            out.push(x);
            x = self.rot[x];
        }
        out
    }

    pub fn valence(&self, d: usize) -> usize {
        self.around(d).len()
    }

    /// Identifier of the vertex of `d`: its least dart.
    pub fn vertex_id(&self, d: usize) -> usize {
        *self.around(d).iter().min().unwrap()
    }

    pub fn prev(&self, d: usize) -> usize {
        let mut x = d;
        while self.rot[x] != d {
            x = self.rot[x];
        }
        x
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.faces().len() as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2).max(0) as usize
    }

    /// Spine conditions relative to a carrier of Euler characteristic `chi`.
    pub fn diagnose_against(&self, chi: i64) -> Result<(), SpineDiagnostic> {
        if self.num_edges() == 0 {
            return Err(SpineDiagnostic::Empty);
        }
        let comps = map::components(self);
        if comps != 1 {
            return Err(SpineDiagnostic::Disconnected(comps));
        }
        let faces = self.faces().len();
        if faces != 1 {
            return Err(SpineDiagnostic::ComplementFaces(faces));
        }
        let graph_chi = self.num_vertices() as i64 - self.num_edges() as i64;
        if graph_chi + 1 != chi {
            return Err(SpineDiagnostic::ComplementNotDisc { euler: graph_chi, expected: chi });
        }
        for orb in self.vertices() {
            if orb.len() < 3 {
                return Err(SpineDiagnostic::LowValence {
                    vertex: *orb.iter().min().unwrap(),
                    valence: orb.len(),
                });
            }
        }
        Ok(())
    }

    /// Spine conditions on the surface the rotation system itself defines.
    pub fn diagnose(&self) -> Result<(), SpineDiagnostic> {
        if self.euler_characteristic() == 2 {
            return Err(SpineDiagnostic::SphereCarrier);
        }
        let chi = self.num_vertices() as i64 - self.num_edges() as i64 + 1;
        self.diagnose_against(chi)
    }

    pub fn is_valid(&self) -> bool {
        self.diagnose().is_ok()
    }

    pub fn is_trivalent(&self) -> bool {
        self.vertices().iter().all(|v| v.len() == 3)
    }

    /// Dense surface map and the spine-to-dense dart relabeling.
    pub fn to_surface(&self) -> (CombSurface, Vec<usize>) {
        let darts = self.darts();
        let mut idx = vec![NONE; self.rot.len()];
        for (i, &d) in darts.iter().enumerate() {
            idx[d] = i;
        }
        let opp = darts.iter().map(|&d| idx[d ^ 1]).collect();
        let rot = darts.iter().map(|&d| idx[self.rot[d]]).collect();
        (CombSurface::from_parts_unchecked(opp, rot), idx)
    }

    /// Compacts labels to `0..E` preserving their order.
    pub fn compacted(&self) -> Spine {
        let edges = self.edges();
        let mut idx = vec![NONE; self.rot.len()];
        for (i, &l) in edges.iter().enumerate() {
            idx[2 * l] = 2 * i;
            idx[2 * l + 1] = 2 * i + 1;
        }
        let mut rot = vec![NONE; 2 * edges.len()];
        let mut color = vec![0; 2 * edges.len()];
        for d in self.darts() {
            rot[idx[d]] = idx[self.rot[d]];
            color[idx[d]] = self.color[d];
        }
        Spine { rot, color }
    }

    pub fn same_up_to_relabeling(&self, other: &Spine) -> bool {
        map::is_isomorphic(self, other)
    }

    pub fn canonical_code(&self) -> Vec<(usize, usize, u64)> {
        map::canonical_code(self)
    }

    pub fn free_label(&self) -> usize {
        (0..=self.rot.len() / 2).find(|&l| !self.edge_alive(l)).unwrap()
    }

    fn ensure_label(&mut self, label: usize) {
        if 2 * label + 2 > self.rot.len() {
            self.rot.resize(2 * label + 2, NONE);
            self.color.resize(2 * label + 2, 0);
        }
    }

    /// Collapses edge `label` joining distinct vertices. Caller checks.
    pub(crate) fn contract_raw(&mut self, label: usize) {
        let (a, b) = (2 * label, 2 * label + 1);
        let (pa, pb) = (self.prev(a), self.prev(b));
        let (na, nb) = (self.rot[a], self.rot[b]);
        self.rot[pa] = nb;
        self.rot[pb] = na;
        self.rot[a] = NONE;
        self.rot[b] = NONE;
    }

    /// Splits the vertex whose darts are `block1` followed by `block2` in
    /// rotation order; dart `2·label` goes with `block1`. Caller checks.
    pub(crate) fn expand_raw(&mut self, block1: &[usize], block2: &[usize], label: usize, color: u64) {
        self.ensure_label(label);
        let (x, y) = (2 * label, 2 * label + 1);
        let mut cyc1 = vec![x];
        cyc1.extend_from_slice(block1);
        let mut cyc2 = vec![y];
        cyc2.extend_from_slice(block2);
        for cyc in [cyc1, cyc2] {
            for i in 0..cyc.len() {
                self.rot[cyc[i]] = cyc[(i + 1) % cyc.len()];
            }
        }
        self.color[x] = color;
        self.color[y] = color;
    }

    /// Adds an edge from the corner before dart `c1` to the corner before `c2`.
    pub(crate) fn add_edge_raw(&mut self, c1: usize, c2: usize, label: usize, color: u64) {
        self.ensure_label(label);
        let (x, y) = (2 * label, 2 * label + 1);
        let p1 = self.prev(c1);
        self.rot[p1] = x;
        self.rot[x] = c1;
        let p2 = self.prev(c2);
        self.rot[p2] = y;
        self.rot[y] = c2;
        self.color[x] = color;
        self.color[y] = color;
    }

    pub(crate) fn remove_edge_raw(&mut self, label: usize) {
        for z in [2 * label, 2 * label + 1] {
            let p = self.prev(z);
            if p != z {
                self.rot[p] = self.rot[z];
            }
            self.rot[z] = NONE;
        }
    }

    /// Inserts a valence-2 vertex in the edge of `d`. Afterwards `d` ends at
    /// the new vertex and `2·label` leaves it towards the old far end; the
    /// corner on `d`'s side is the one before `2·label`.
    pub(crate) fn subdivide_raw(&mut self, d: usize, label: usize) {
        self.ensure_label(label);
        let (n0, n1) = (2 * label, 2 * label + 1);
        let far = d ^ 1;
        let p = self.prev(far);
        if p == far {
            self.rot[n1] = n1;
        } else {
            self.rot[p] = n1;
            self.rot[n1] = self.rot[far];
        }
        self.rot[far] = n0;
        self.rot[n0] = far;
        self.color[n0] = self.color[d];
        self.color[n1] = self.color[d];
    }

    /// Prunes valence-1 vertices and amalgamates valence-2 vertices until
    /// none remain (isolated circles are left alone). Returns labels removed.
    pub(crate) fn normalize_raw(&mut self) -> Vec<usize> {
        let mut removed = Vec::new();
        loop {
            let mut changed = false;
            for d in 0..self.rot.len() {
                if self.rot[d] == NONE {
                    continue;
                }
                if self.rot[d] == d {
                    removed.push(d / 2);
                    self.remove_edge_raw(d / 2);
                    changed = true;
                    break;
                }
                let e = self.rot[d];
                if self.rot[e] == d && e != (d ^ 1) {
                    // keep the smaller label
                    let (keep, drop) = if d / 2 <= e / 2 { (d, e) } else { (e, d) };
                    let far = drop ^ 1;
                    let c = self.color[keep].max(self.color[drop]);
                    let p = self.prev(far);
                    if p == far {
                        self.rot[keep] = keep;
                    } else {
                        self.rot[p] = keep;
                        self.rot[keep] = self.rot[far];
                    }
                    self.rot[drop] = NONE;
                    self.rot[far] = NONE;
                    self.color[keep] = c;
                    self.color[keep ^ 1] = c;
                    removed.push(drop / 2);
                    changed = true;
                    break;
                }
            }
            if !changed {
                return removed;
            }
        }
    }

    /// Deterministically expands every vertex of valence above 3.
    pub fn expanded_to_trivalent(&self) -> Spine {
        let mut s = self.clone();
        while let Some(orb) = s.vertices().into_iter().find(|v| v.len() > 3) {
            let label = s.free_label();
            s.expand_raw(&orb[0..2], &orb[2..], label, 0);
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in self.darts() {
            out.push_str(&format!("dart {}: opp={} rot={}\n", d, d ^ 1, self.rot[d]));
        }
        out
    }

    /// Parses the surface-file format; darts must pair as `2L, 2L+1`.
    pub fn parse(text: &str) -> Result<Spine, SurfError> {
        let m = CombSurface::parse(text)?;
        for d in 0..m.num_darts() {
            if m.opp(d) != (d ^ 1) {
                return Err(SurfError::Parse(format!(
                    "spine darts must pair as 2L,2L+1 (dart {d})"
                )));
            }
        }
        let s = Spine::from_rot(m.rot_perm().to_vec());
        s.diagnose().map_err(SurfError::NotASpine)?;
        Ok(s)
    }
}

struct SparseMap<'a> {
    opp: &'a [usize],
    rot: &'a [usize],
}

impl DartMap for SparseMap<'_> {
    fn dart_bound(&self) -> usize {
        self.rot.len()
    }
    fn opp(&self, d: usize) -> usize {
        self.opp[d]
    }
    fn rot(&self, d: usize) -> usize {
        self.rot[d]
    }
}
