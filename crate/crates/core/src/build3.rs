//! Layered triangulations of S×I, mapping tori and lens-space bounds.
//!
//! File format: a `format: 1` line, a `tets: N` line, then one line per
//! tetrahedron `tet i: f0->j:PPPP f1->... f3->...`, where face `k` (opposite
//! vertex `k`) is glued to tetrahedron `j` by the vertex permutation written
//! as the images of `0123`. An unglued face is written `fk->-`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::spinemoves::{pachner, MoveError, PachnerMove};
use crate::surf::{DartMap, Triangulation2, NONE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Build3Error {
    #[error("BoundaryMismatch: {0}")]
    BoundaryMismatch(String),
    #[error("NotClosed: {0} unglued faces")]
    NotClosed(usize),
    #[error("NoTopBoundary: triangulation has no top boundary")]
    NoTopBoundary,
    #[error("NoAcyclicOrientation: edges cannot be ordered")]
    NoAcyclicOrientation,
    #[error("FaceAlreadyGlued: tet {0} face {1}")]
    FaceAlreadyGlued(usize, usize),
    #[error("NotCoprime: gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),
    #[error("OutOfRange: need 0 < q < p, got p={0} q={1}")]
    OutOfRange(i64, i64),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("{0}")]
    Move(#[from] MoveError),
}

pub type Result<T> = std::result::Result<T, Build3Error>;

/// Images of the vertices `0..4`.
pub type Perm = [u8; 4];

pub fn perm_inverse(p: &Perm) -> Perm {
    let mut q = [0; 4];
    for i in 0..4 {
        q[p[i] as usize] = i as u8;
    }
    q
}

pub fn perm_sign(p: &Perm) -> i8 {
    let mut s = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm,
}

/// A boundary surface: each dart's corner (tail) as a tetrahedron vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub surface: Triangulation2,
    pub corners: Vec<(usize, u8)>,
}

impl Boundary {
    fn face(&self, d: usize) -> (usize, [u8; 3], [usize; 3]) {
        let m = self.surface.surface();
        let ds = [d, m.face_next(d), m.face_next(m.face_next(d))];
        let t = self.corners[d].0;
        (t, ds.map(|x| self.corners[x].1), ds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation3 {
    pub tets: Vec<[Option<Gluing>; 4]>,
    pub bottom: Option<Boundary>,
    pub top: Option<Boundary>,
}

fn missing(v: [u8; 3]) -> u8 {
    (0..4).find(|i| !v.contains(i)).expect("three distinct vertices")
}

impl Triangulation3 {
    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn unglued_faces(&self) -> usize {
        self.tets.iter().flatten().filter(|g| g.is_none()).count()
    }

    pub fn is_closed(&self) -> bool {
        self.unglued_faces() == 0
    }

    /// Glues the face of `a` with vertices `av` to the face of `b` with
    /// vertices `bv`, matching them in order.
    fn glue_faces(&mut self, a: usize, av: [u8; 3], b: usize, bv: [u8; 3]) -> Result<()> {
        let (ma, mb) = (missing(av), missing(bv));
        let mut p = [0u8; 4];
        for k in 0..3 {
            p[av[k] as usize] = bv[k];
        }
        p[ma as usize] = mb;
        for (t, f) in [(a, ma), (b, mb)] {
            if self.tets[t][f as usize].is_some() {
                return Err(Build3Error::FaceAlreadyGlued(t, f as usize));
            }
        }
        self.tets[a][ma as usize] = Some(Gluing { tet: b, perm: p });
        self.tets[b][mb as usize] = Some(Gluing { tet: a, perm: perm_inverse(&p) });
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("format: 1\ntets: {}\n", self.tets.len());
        for (i, t) in self.tets.iter().enumerate() {
            s.push_str(&format!("tet {i}:"));
            for (f, g) in t.iter().enumerate() {
                match g {
                    Some(g) => {
                        let p: String = g.perm.iter().map(|d| char::from(b'0' + d)).collect();
                        s.push_str(&format!(" f{f}->{}:{p}", g.tet));
                    }
                    None => s.push_str(&format!(" f{f}->-")),
                }
            }
            s.push('\n');
        }
        s
    }

    /// Reads the file format. Boundary labels are not stored.
    pub fn parse(text: &str) -> Result<Triangulation3> {
        let bad = |m: String| Build3Error::Parse(m);
        let mut tets: Vec<[Option<Gluing>; 4]> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with("format:") || line.starts_with("tets:") {
                continue;
            }
            let (head, rest) = line.split_once(':').ok_or_else(|| bad(format!("line {}: missing ':'", ln + 1)))?;
            let idx: usize = head
                .strip_prefix("tet")
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| bad(format!("line {}: expected `tet <i>`", ln + 1)))?;
            if idx != tets.len() {
                return Err(bad(format!("line {}: tetrahedra out of order", ln + 1)));
            }
            let mut row = [None; 4];
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(bad(format!("line {}: expected 4 faces", ln + 1)));
            }
            for (f, field) in fields.iter().enumerate() {
                let spec = field
                    .strip_prefix(&format!("f{f}->"))
                    .ok_or_else(|| bad(format!("line {}: expected f{f}->", ln + 1)))?;
                if spec == "-" {
                    continue;
                }
                let (j, p) = spec.split_once(':').ok_or_else(|| bad(format!("line {}: bad gluing {spec}", ln + 1)))?;
                let tet: usize = j.parse().map_err(|_| bad(format!("line {}: bad index {j}", ln + 1)))?;
                let digits: Vec<u8> = p.bytes().map(|c| c.wrapping_sub(b'0')).collect();
                let mut perm = [0u8; 4];
                let mut seen = [false; 4];
                if digits.len() != 4 {
                    return Err(bad(format!("line {}: permutation {p}", ln + 1)));
                }
                for k in 0..4 {
                    if digits[k] > 3 || seen[digits[k] as usize] {
                        return Err(bad(format!("line {}: permutation {p}", ln + 1)));
                    }
                    seen[digits[k] as usize] = true;
                    perm[k] = digits[k];
                }
                row[f] = Some(Gluing { tet, perm });
            }
            tets.push(row);
        }
        for t in &tets {
            for g in t.iter().flatten() {
                if g.tet >= tets.len() {
                    return Err(bad(format!("gluing to missing tetrahedron {}", g.tet)));
                }
            }
        }
        Ok(Triangulation3 { tets, bottom: None, top: None })
    }
}

/// Orientation of every edge so that no triangle is cyclically oriented.
/// `fwd[d]` says the edge runs along `d`.
fn acyclic_orientation(t: &Triangulation2) -> Option<Vec<bool>> {
    let m = t.surface();
    let n = m.num_darts();
    let faces = m.faces();
    let face_of = m.face_of();
    let edges: Vec<usize> = (0..n).filter(|&d| d < m.opp(d)).collect();
    let mut val: Vec<Option<bool>> = vec![None; n];
    let ok = |val: &[Option<bool>], d: usize| -> bool {
        let f = &faces[face_of[d]];
        let vs: Vec<Option<bool>> = f.iter().map(|&x| val[x]).collect();
        !(vs.iter().all(|v| *v == Some(true)) || vs.iter().all(|v| *v == Some(false)))
    };
    fn go(
        k: usize,
        edges: &[usize],
        val: &mut Vec<Option<bool>>,
        opp: &dyn Fn(usize) -> usize,
        ok: &dyn Fn(&[Option<bool>], usize) -> bool,
    ) -> bool {
        if k == edges.len() {
            return true;
        }
        let d = edges[k];
        for v in [true, false] {
            val[d] = Some(v);
            val[opp(d)] = Some(!v);
            if ok(val, d) && ok(val, opp(d)) && go(k + 1, edges, val, opp, ok) {
                return true;
            }
        }
        val[d] = None;
        val[opp(d)] = None;
        false
    }
    let opp = |d: usize| m.opp(d);
    if go(0, &edges, &mut val, &opp, &ok) {
        Some(val.into_iter().map(|v| v.unwrap_or(true)).collect())
    } else {
        None
    }
}

/// S×I with three tetrahedra per triangle. Both boundaries are `t` with the
/// same dart labels.
pub fn collar(t: &Triangulation2) -> Result<Triangulation3> {
    let m = t.surface();
    let fwd = acyclic_orientation(t).ok_or(Build3Error::NoAcyclicOrientation)?;
    let faces = m.faces();
    let face_of = m.face_of();
    let nf = faces.len();
    // rank of a corner within its triangle: 0 lowest
    let mut rank = vec![0usize; m.num_darts()];
    for f in &faces {
        for k in 0..3 {
            let c = f[k];
            let below = usize::from(fwd[f[(k + 2) % 3]]) + usize::from(!fwd[c]);
            rank[c] = below;
        }
    }
    let mut keys: Vec<[(usize, u8); 4]> = Vec::with_capacity(3 * nf);
    for f in &faces {
        let mut c = f.clone();
        c.sort_by_key(|&x| rank[x]);
        let (x, y, z) = (c[0], c[1], c[2]);
        keys.push([(x, 0), (y, 0), (z, 0), (z, 1)]);
        keys.push([(x, 0), (y, 0), (y, 1), (z, 1)]);
        keys.push([(x, 0), (x, 1), (y, 1), (z, 1)]);
    }
    let pos = |tet: usize, k: (usize, u8)| -> Option<u8> { keys[tet].iter().position(|&q| q == k).map(|i| i as u8) };
    let find = |f: usize, tri: [(usize, u8); 3]| -> (usize, [u8; 3]) {
        for tet in 3 * f..3 * f + 3 {
            if let (Some(a), Some(b), Some(c)) = (pos(tet, tri[0]), pos(tet, tri[1]), pos(tet, tri[2])) {
                return (tet, [a, b, c]);
            }
        }
        unreachable!("prism face not found")
    };
    let mut x = Triangulation3 { tets: vec![[None; 4]; 3 * nf], bottom: None, top: None };
    for (f, face) in faces.iter().enumerate() {
        let mut c = face.clone();
        c.sort_by_key(|&x| rank[x]);
        let (cx, cy, cz) = (c[0], c[1], c[2]);
        let (a, av) = find(f, [(cx, 0), (cy, 0), (cz, 1)]);
        let b = 3 * f + 1;
        x.glue_faces(a, av, b, [0, 1, 3])?;
        let (a, av) = find(f, [(cx, 0), (cy, 1), (cz, 1)]);
        x.glue_faces(a, av, 3 * f + 2, [0, 2, 3])?;
    }
    for c in 0..m.num_darts() {
        let e = m.opp(c);
        if c > e {
            continue;
        }
        let (fa, fb) = (face_of[c], face_of[e]);
        let (c1, e1) = (m.face_next(c), m.face_next(e));
        let to_b = |k: (usize, u8)| -> (usize, u8) { (if k.0 == c { e1 } else { e }, k.1) };
        let (u, v) = if rank[c] < rank[c1] { (c, c1) } else { (c1, c) };
        for tri in [[(u, 0), (v, 0), (v, 1)], [(u, 0), (u, 1), (v, 1)]] {
            let (ta, av) = find(fa, tri);
            let (tb, bv) = find(fb, tri.map(to_b));
            x.glue_faces(ta, av, tb, bv)?;
        }
    }
    let corners = |level: u8, which: usize| -> Vec<(usize, u8)> {
        (0..m.num_darts())
            .map(|d| {
                let tet = 3 * face_of[d] + which;
                (tet, pos(tet, (d, level)).expect("corner in tetrahedron"))
            })
            .collect()
    };
    x.bottom = Some(Boundary { surface: t.clone(), corners: corners(0, 0) });
    x.top = Some(Boundary { surface: t.clone(), corners: corners(1, 2) });
    Ok(x)
}

/// Attaches one tetrahedron to the top realising `mv`.
pub fn layer_move(x: &Triangulation3, mv: PachnerMove) -> Result<Triangulation3> {
    let top = x.top.as_ref().ok_or(Build3Error::NoTopBoundary)?;
    let (nt, map) = pachner(&top.surface, mv)?;
    let m = top.surface.surface();
    let mut y = x.clone();
    let k = y.tets.len();
    y.tets.push([None; 4]);
    let mut corners = vec![(NONE, 0u8); nt.surface().num_darts()];
    for (old, &new) in map.iter().enumerate() {
        if new != NONE {
            corners[new] = top.corners[old];
        }
    }
    let f = |d: usize| m.face_next(d);
    match mv {
        PachnerMove::Flip22(d) => {
            let dp = m.opp(d);
            let (d1, e1) = (f(d), f(dp));
            let (d2, e2) = (f(d1), f(e1));
            let (ta, av, _) = top.face(d);
            y.glue_faces(k, [0, 1, 2], ta, av)?;
            let (tb, bv, _) = top.face(dp);
            y.glue_faces(k, [1, 0, 3], tb, bv)?;
            for (dart, v) in [(d, 2), (e2, 3), (d1, 1), (dp, 3), (d2, 2), (e1, 0)] {
                corners[dart] = (k, v);
            }
        }
        PachnerMove::Split13(d) => {
            let n = m.num_darts();
            let (d1, d2) = (f(d), f(f(d)));
            let (ta, av, _) = top.face(d);
            y.glue_faces(k, [0, 1, 2], ta, av)?;
            let (ma, am, mb, bm, mc, cm) = (n, n + 1, n + 2, n + 3, n + 4, n + 5);
            for (dart, v) in [(d, 0), (bm, 1), (ma, 3), (d1, 1), (cm, 2), (mb, 3), (d2, 2), (am, 0), (mc, 3)] {
                corners[dart] = (k, v);
            }
        }
        PachnerMove::Merge31(s0) => {
            let spokes = [s0, m.rot(s0), m.rot(m.rot(s0))];
            for (i, &s) in spokes.iter().enumerate() {
                let j = spokes.iter().position(|&t| m.opp(t) == f(f(s))).expect("valence three");
                let (ta, av, _) = top.face(s);
                y.glue_faces(k, [3, i as u8, j as u8], ta, av)?;
                corners[map[f(s)]] = (k, i as u8);
            }
        }
    }
    y.top = Some(Boundary { surface: nt, corners });
    Ok(y)
}

/// Glues the top to the bottom by `phi`, a dart map from the top surface to
/// the bottom surface.
pub fn glue_monodromy(x: &Triangulation3, phi: &[usize]) -> Result<Triangulation3> {
    let top = x.top.as_ref().ok_or(Build3Error::NoTopBoundary)?;
    let bottom = x.bottom.as_ref().ok_or(Build3Error::NoTopBoundary)?;
    let (a, b) = (top.surface.surface(), bottom.surface.surface());
    let n = a.num_darts();
    if phi.len() != n || b.num_darts() != n {
        return Err(Build3Error::BoundaryMismatch(format!("{n} top darts, {} bottom darts", b.num_darts())));
    }
    let mut hit = vec![false; n];
    for d in 0..n {
        if phi[d] >= n || hit[phi[d]] {
            return Err(Build3Error::BoundaryMismatch("map is not a bijection".into()));
        }
        hit[phi[d]] = true;
        if phi[a.opp(d)] != b.opp(phi[d]) || phi[a.rot(d)] != b.rot(phi[d]) {
            return Err(Build3Error::BoundaryMismatch(format!("dart {d} not preserved")));
        }
    }
    let mut y = x.clone();
    for face in a.faces() {
        let (tt, tv, _) = top.face(face[0]);
        let (tb, bv, _) = bottom.face(phi[face[0]]);
        y.glue_faces(tt, tv, tb, bv)?;
    }
    y.top = None;
    y.bottom = None;
    Ok(y)
}

/// Union-find over keys with a parity bit.
struct ParityUf {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityUf {
    fn new(n: usize) -> Self {
        ParityUf { parent: (0..n).collect(), parity: vec![0; n] }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let (r, p) = self.find(self.parent[x]);
        self.parent[x] = r;
        self.parity[x] ^= p;
        (r, self.parity[x])
    }

    /// Returns false on a parity conflict.
    fn union(&mut self, a: usize, b: usize, par: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == par;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.parity[hi] = pa ^ pb ^ par;
        true
    }
}

const EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_index(i: u8, j: u8) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    EDGES.iter().position(|&e| e == (a, b)).expect("edge")
}

/// Cells of the triangulation after identifications.
struct Cells {
    vertex: Vec<usize>,
    num_vertices: usize,
    /// per tet edge key: (class, sign relative to the class representative)
    edge: Vec<(usize, i8)>,
    edge_reps: Vec<usize>,
    face_reps: Vec<(usize, u8)>,
    edge_ok: bool,
}

fn cells(x: &Triangulation3) -> Cells {
    let nt = x.tets.len();
    let mut vuf = ParityUf::new(4 * nt);
    let mut euf = ParityUf::new(6 * nt);
    let mut edge_ok = true;
    let mut face_reps = Vec::new();
    for (t, row) in x.tets.iter().enumerate() {
        for f in 0..4u8 {
            match row[f as usize] {
                Some(g) => {
                    if (g.tet, g.perm[f as usize]) >= (t, f) {
                        face_reps.push((t, f));
                    }
                    for v in (0..4u8).filter(|&v| v != f) {
                        vuf.union(4 * t + v as usize, 4 * g.tet + g.perm[v as usize] as usize, 0);
                    }
                    for &(i, j) in EDGES.iter().filter(|&&(i, j)| i != f && j != f) {
                        let (pi, pj) = (g.perm[i as usize], g.perm[j as usize]);
                        let flip = u8::from(pi > pj);
                        if !euf.union(6 * t + edge_index(i, j), 6 * g.tet + edge_index(pi, pj), flip) {
                            edge_ok = false;
                        }
                    }
                }
                None => face_reps.push((t, f)),
            }
        }
    }
    let mut vid = vec![usize::MAX; 4 * nt];
    let mut vertex = vec![0; 4 * nt];
    let mut nv = 0;
    for k in 0..4 * nt {
        let r = vuf.find(k).0;
        if vid[r] == usize::MAX {
            vid[r] = nv;
            nv += 1;
        }
        vertex[k] = vid[r];
    }
    let mut eid = vec![usize::MAX; 6 * nt];
    let mut edge = vec![(0, 1); 6 * nt];
    let mut edge_reps = Vec::new();
    for k in 0..6 * nt {
        let (r, p) = euf.find(k);
        if eid[r] == usize::MAX {
            eid[r] = edge_reps.len();
            edge_reps.push(r);
        }
        edge[k] = (eid[r], if p == 0 { 1 } else { -1 });
    }
    Cells { vertex, num_vertices: nv, edge, edge_reps, face_reps, edge_ok }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report3 {
    pub tets: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub closed: bool,
    pub unglued: usize,
    pub involution_ok: bool,
    pub orientable: bool,
    pub edges_ok: bool,
    /// Euler characteristic of each vertex link.
    pub links: Vec<i64>,
}

impl Report3 {
    pub fn valid(&self) -> bool {
        self.involution_ok
            && self.orientable
            && self.edges_ok
            && (!self.closed || (self.euler == 0 && self.links.iter().all(|&l| l == 2)))
    }
}

impl fmt::Display for Report3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tetrahedra: {}", self.tets)?;
        writeln!(f, "vertices: {} edges: {} faces: {}", self.vertices, self.edges, self.faces)?;
        writeln!(f, "euler: {}", self.euler)?;
        writeln!(f, "closed: {}", if self.closed { "yes".to_string() } else { format!("no ({} boundary faces)", self.unglued) })?;
        writeln!(f, "gluing involution: {}", if self.involution_ok { "ok" } else { "FAILED" })?;
        writeln!(f, "orientable: {}", if self.orientable { "yes" } else { "no" })?;
        writeln!(f, "edges: {}", if self.edges_ok { "ok" } else { "edge identified with its reverse" })?;
        let links: Vec<String> = self.links.iter().map(|l| l.to_string()).collect();
        writeln!(f, "vertex link euler: {}", links.join(" "))?;
        writeln!(f, "valid: {}", if self.valid() { "yes" } else { "no" })
    }
}

pub fn validate_3manifold(x: &Triangulation3) -> Report3 {
    let nt = x.tets.len();
    let mut involution_ok = true;
    for (t, row) in x.tets.iter().enumerate() {
        for f in 0..4 {
            if let Some(g) = row[f] {
                let back = x.tets.get(g.tet).and_then(|r| r[g.perm[f] as usize]);
                let ok = matches!(back, Some(b) if b.tet == t && b.perm == perm_inverse(&g.perm));
                let mut seen = [false; 4];
                let perm_ok = g.perm.iter().all(|&v| v < 4 && !std::mem::replace(&mut seen[v as usize], true));
                involution_ok &= ok && perm_ok;
            }
        }
    }
    if !involution_ok {
        return Report3 {
            tets: nt,
            vertices: 0,
            edges: 0,
            faces: 0,
            euler: 0,
            closed: x.is_closed(),
            unglued: x.unglued_faces(),
            involution_ok,
            orientable: false,
            edges_ok: false,
            links: Vec::new(),
        };
    }
    // orientation by propagation
    let mut orient = vec![0i8; nt];
    let mut orientable = true;
    for s in 0..nt {
        if orient[s] != 0 {
            continue;
        }
        orient[s] = 1;
        let mut stack = vec![s];
        while let Some(t) = stack.pop() {
            for g in x.tets[t].iter().flatten() {
                let want = -orient[t] * perm_sign(&g.perm);
                if orient[g.tet] == 0 {
                    orient[g.tet] = want;
                    stack.push(g.tet);
                } else if orient[g.tet] != want {
                    orientable = false;
                }
            }
        }
    }
    let c = cells(x);
    let (nv, ne, nf) = (c.num_vertices, c.edge_reps.len(), c.face_reps.len());
    let mut links = vec![0i64; nv];
    for k in 0..4 * nt {
        links[c.vertex[k]] += 1;
    }
    for &(t, f) in &c.face_reps {
        for v in (0..4u8).filter(|&v| v != f) {
            links[c.vertex[4 * t + v as usize]] -= 1;
        }
    }
    for &r in &c.edge_reps {
        let (t, e) = (r / 6, r % 6);
        let (i, j) = EDGES[e];
        links[c.vertex[4 * t + i as usize]] += 1;
        links[c.vertex[4 * t + j as usize]] += 1;
    }
    Report3 {
        tets: nt,
        vertices: nv,
        edges: ne,
        faces: nf,
        euler: nv as i64 - ne as i64 + nf as i64 - nt as i64,
        closed: x.is_closed(),
        unglued: x.unglued_faces(),
        involution_ok,
        orientable,
        edges_ok: c.edge_ok,
        links,
    }
}

/// Diagonal of the Smith normal form (nonzero entries, nonnegative).
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut top = 0;
    while top < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in top..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }
        loop {
            let p = a[top][top].clone();
            let mut changed = false;
            for i in top + 1..rows {
                if !a[i][top].is_zero() {
                    let q = a[i][top].div_floor(&p);
                    for j in top..cols {
                        let v = &q * &a[top][j];
                        a[i][j] -= v;
                    }
                    if !a[i][top].is_zero() {
                        changed = true;
                    }
                }
            }
            for j in top + 1..cols {
                if !a[top][j].is_zero() {
                    let q = a[top][j].div_floor(&p);
                    for row in a.iter_mut().skip(top) {
                        let v = &q * &row[top];
                        row[j] -= v;
                    }
                    if !a[top][j].is_zero() {
                        changed = true;
                    }
                }
            }
            if !changed {
                // pivot must divide the rest of the block
                let bad = (top + 1..rows)
                    .flat_map(|i| (top + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&a[i][j] % &p).is_zero());
                match bad {
                    Some((i, _)) => {
                        let row = a[i].clone();
                        for (v, r) in a[top].iter_mut().zip(row) {
                            *v += r;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of the pivot row/column to the corner
            let mut best = (top, top);
            for i in top..rows {
                if !a[i][top].is_zero() && a[i][top].abs() < a[best.0][best.1].abs() {
                    best = (i, top);
                }
            }
            for j in top..cols {
                if !a[top][j].is_zero() && a[top][j].abs() < a[best.0][best.1].abs() {
                    best = (top, j);
                }
            }
            a.swap(top, best.0);
            for row in a.iter_mut() {
                row.swap(top, best.1);
            }
        }
        diag.push(a[top][top].abs());
        top += 1;
    }
    diag
}

/// First homology as a free rank and torsion coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Homology {
    /// Cokernel of an integer matrix with `rows` rows.
    pub fn cokernel(rows: usize, matrix: Vec<Vec<BigInt>>) -> Homology {
        let d = smith_diagonal(matrix);
        Homology { rank: rows - d.len(), torsion: d.into_iter().filter(|x| !x.is_one()).collect() }
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "H1 = {}", parts.join(" + "))
    }
}

/// H1 of a closed triangulation from its cellular chain complex.
pub fn homology(x: &Triangulation3) -> Result<Homology> {
    let unglued = x.unglued_faces();
    if unglued > 0 {
        return Err(Build3Error::NotClosed(unglued));
    }
    let c = cells(x);
    let ne = c.edge_reps.len();
    let mut d1 = vec![vec![BigInt::zero(); ne]; c.num_vertices];
    for (e, &r) in c.edge_reps.iter().enumerate() {
        let (t, k) = (r / 6, r % 6);
        let (i, j) = EDGES[k];
        d1[c.vertex[4 * t + j as usize]][e] += 1;
        d1[c.vertex[4 * t + i as usize]][e] -= 1;
    }
    let mut d2 = vec![vec![BigInt::zero(); c.face_reps.len()]; ne];
    for (col, &(t, f)) in c.face_reps.iter().enumerate() {
        let v: Vec<u8> = (0..4u8).filter(|&v| v != f).collect();
        for (a, b, s) in [(v[1], v[2], 1i8), (v[0], v[2], -1), (v[0], v[1], 1)] {
            let (e, sign) = c.edge[6 * t + edge_index(a, b)];
            d2[e][col] += BigInt::from(s * sign);
        }
    }
    let r1 = smith_diagonal(d1).len();
    let h = Homology::cokernel(ne, d2);
    Ok(Homology { rank: h.rank - r1, torsion: h.torsion })
}

/// Layered S×I over `moves` from `start`, closed up by `phi` (top darts to
/// start darts).
pub fn mapping_torus(start: &Triangulation2, moves: &[PachnerMove], phi: &[usize]) -> Result<Triangulation3> {
    let mut x = collar(start)?;
    for &mv in moves {
        x = layer_move(&x, mv)?;
    }
    glue_monodromy(&x, phi)
}

/// `Z ⊕ coker(φ_* − I)` computed on the surface alone, for a one-vertex
/// `start`, a path of flips and `phi` from the end's darts to `start`'s.
pub fn monodromy_homology(start: &Triangulation2, flips: &[usize], phi: &[usize]) -> Result<Homology> {
    let m0 = start.surface();
    if start.num_vertices() != 1 {
        return Err(Build3Error::BoundaryMismatch("start must have one vertex".into()));
    }
    let n = m0.num_darts();
    let edges: Vec<usize> = (0..n).filter(|&d| d < m0.opp(d)).collect();
    let ne = edges.len();
    let unit = |d: usize| -> Vec<i64> {
        let mut v = vec![0; ne];
        let e = edges.iter().position(|&x| x == d.min(m0.opp(d))).expect("edge");
        v[e] = if d < m0.opp(d) { 1 } else { -1 };
        v
    };
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let mut cls: Vec<Vec<i64>> = (0..n).map(unit).collect();
    let mut t = start.clone();
    for &d in flips {
        let m = t.surface();
        let dp = m.opp(d);
        let d2 = m.face_next(m.face_next(d));
        let e1 = m.face_next(dp);
        let c = add(&cls[d2], &cls[e1]);
        cls[dp] = c.iter().map(|x| -x).collect();
        cls[d] = c;
        t = pachner(&t, PachnerMove::Flip22(d))?.0;
    }
    if phi.len() != n {
        return Err(Build3Error::BoundaryMismatch("map length".into()));
    }
    let mut cols: Vec<Vec<i64>> = m0.faces().iter().map(|f| add(&add(&unit(f[0]), &unit(f[1])), &unit(f[2]))).collect();
    for x in 0..n {
        cols.push(add(&unit(phi[x]), &cls[x].iter().map(|v| -v).collect::<Vec<_>>()));
    }
    let matrix: Vec<Vec<BigInt>> = (0..ne).map(|r| cols.iter().map(|c| BigInt::from(c[r])).collect()).collect();
    let h = Homology::cokernel(ne, matrix);
    Ok(Homology { rank: h.rank + 1, torsion: h.torsion })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub p: i64,
    pub q: i64,
    pub terms: Vec<i64>,
    pub sum: i64,
}

pub fn continued_fraction(p: i64, q: i64) -> Result<ContinuedFraction> {
    if !(0 < q && q < p) {
        return Err(Build3Error::OutOfRange(p, q));
    }
    if p.gcd(&q) != 1 {
        return Err(Build3Error::NotCoprime(p, q));
    }
    let (mut a, mut b) = (p, q);
    let mut terms = Vec::new();
    while b != 0 {
        terms.push(a / b);
        (a, b) = (b, a % b);
    }
    let sum = terms.iter().sum();
    Ok(ContinuedFraction { p, q, terms, sum })
}

impl ContinuedFraction {
    pub fn report(&self) -> String {
        let (p, q, s) = (self.p, self.q, self.sum);
        let terms: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        let mut out = String::from("format: 1\n");
        out.push_str(&format!("lens: L({p},{q})\n"));
        out.push_str(&format!("[{}] sum={s}\n", terms.join(",")));
        out.push_str(&format!("bound: k*{s} <= Δ(L({p},{q})) <= {s} (k > 0 universal constant)\n"));
        if q == 1 && p % 2 == 0 && p >= 4 {
            out.push_str(&format!("exact: Δ(L({p},1)) = p-3 = {}\n", p - 3));
        }
        out
    }
}
