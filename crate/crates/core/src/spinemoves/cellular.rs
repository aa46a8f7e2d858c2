//! Spines that are subcomplexes of a fixed cell structure, swaps along paths
//! of cells, sliding off discs and aligning two cellular spines.

use std::collections::BTreeSet;

use super::{edge_swap_elementary, Endpoint, Move, MoveError, MoveSeq, OutEdge, Result, SwapSpec};
use crate::surf::{face_orbits, isomorphisms, CombSurface, DartMap, Spine, NONE};

/// A spine made of 1-cells of a carrier cell structure. Vertices of valence 2
/// are allowed; they are interior points of the spine's edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularSpine {
    carrier: CombSurface,
    inside: Vec<bool>,
}

/// The spine with valence-2 vertices erased, plus where each carrier dart of
/// the spine lands: `(spine dart, index along it)`.
pub(crate) struct Chains {
    pub spine: Spine,
    pub info: Vec<(usize, usize)>,
    /// Number of 1-cells in the edge of each spine label.
    pub length: Vec<usize>,
}

impl CellularSpine {
    pub fn new(carrier: CombSurface, darts: &[usize]) -> Result<Self> {
        let mut inside = vec![false; carrier.num_darts()];
        for &d in darts {
            if d >= inside.len() {
                return Err(MoveError::NotCellular(format!("dart {d} is not a carrier dart")));
            }
            inside[d] = true;
        }
        let c = CellularSpine { carrier, inside };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<()> {
        let s = Spine::induced(&self.carrier, &self.darts())
            .map_err(|d| MoveError::NotCellular(d.to_string()))?;
        let faces = s.faces().len();
        if faces != 1 {
            return Err(MoveError::NotCellular(format!("complement has {faces} boundary cycles")));
        }
        let chi = s.num_vertices() as i64 - s.num_edges() as i64 + 1;
        if chi != self.carrier.euler_characteristic() {
            return Err(MoveError::NotCellular("complement is not a disc".into()));
        }
        if s.vertices().iter().any(|v| v.len() < 2) {
            return Err(MoveError::NotCellular("graph has a leaf".into()));
        }
        if s.vertices().iter().all(|v| v.len() == 2) {
            return Err(MoveError::NotCellular("graph is a circle".into()));
        }
        Ok(())
    }

    pub fn carrier(&self) -> &CombSurface {
        &self.carrier
    }

    pub fn darts(&self) -> Vec<usize> {
        (0..self.inside.len()).filter(|&d| self.inside[d]).collect()
    }

    pub fn contains(&self, d: usize) -> bool {
        self.inside[d]
    }

    /// Number of 1-cells.
    pub fn num_cells(&self) -> usize {
        self.darts().len() / 2
    }

    fn touches(&self, inside: &[bool], vertex_of: &[usize], v: usize) -> usize {
        (0..inside.len()).filter(|&d| inside[d] && vertex_of[d] == v).count()
    }

    /// The next spine dart at or after `d` in the carrier rotation.
    fn next_inside(&self, inside: &[bool], d: usize) -> usize {
        let mut x = self.carrier.rot(d);
        while !inside[x] {
            x = self.carrier.rot(x);
        }
        x
    }

    pub(crate) fn chains(&self) -> Chains {
        let n = self.inside.len();
        let vertex_of = self.carrier.vertex_of();
        let mut valence = vec![0usize; n];
        for d in 0..n {
            if self.inside[d] {
                valence[vertex_of[d]] += 1;
            }
        }
        let branch = |d: usize| valence[vertex_of[d]] >= 3;
        let opp = |d: usize| self.carrier.opp(d);
        let walk = |d: usize| {
            let mut c = vec![d];
            let mut cur = d;
            while !branch(opp(cur)) {
                cur = self.next_inside(&self.inside, opp(cur));
                c.push(cur);
            }
            c
        };
        let mut info = vec![(NONE, 0); n];
        let mut start_id = vec![NONE; n];
        let mut length = Vec::new();
        let mut label = 0;
        for d in 0..n {
            if !self.inside[d] || !branch(d) || start_id[d] != NONE {
                continue;
            }
            let fwd = walk(d);
            let back = walk(opp(*fwd.last().unwrap()));
            for (k, chain) in [fwd, back].into_iter().enumerate() {
                start_id[chain[0]] = 2 * label + k;
                for (i, &c) in chain.iter().enumerate() {
                    info[c] = (2 * label + k, i);
                }
            }
            length.push(walk(d).len());
            label += 1;
        }
        let mut rot = vec![NONE; 2 * label];
        for d in 0..n {
            if start_id[d] != NONE {
                rot[start_id[d]] = start_id[self.next_inside(&self.inside, d)];
            }
        }
        Chains { spine: Spine::from_rot(rot), info, length }
    }

    /// The intrinsic spine: valence-2 vertices erased.
    pub fn intrinsic(&self) -> Spine {
        self.chains().spine
    }

    fn check_path(&self, path: &[usize]) -> Result<()> {
        let bad = |m: String| Err(MoveError::BadArc(m));
        if path.is_empty() {
            return bad("empty path".into());
        }
        let vertex_of = self.carrier.vertex_of();
        let head = |d: usize| vertex_of[self.carrier.opp(d)];
        let mut seen = BTreeSet::new();
        for (i, &d) in path.iter().enumerate() {
            if d >= self.inside.len() {
                return Err(MoveError::UnknownDart(d));
            }
            if self.inside[d] {
                return bad(format!("path dart {d} already lies on the spine"));
            }
            if !seen.insert(d.min(self.carrier.opp(d))) {
                return bad(format!("path repeats the cell of dart {d}"));
            }
            if i + 1 < path.len() && head(d) != vertex_of[path[i + 1]] {
                return bad(format!("path breaks after dart {d}"));
            }
        }
        let on = |v: usize| self.touches(&self.inside, &vertex_of, v) > 0;
        if !on(vertex_of[path[0]]) || !on(head(path[path.len() - 1])) {
            return bad("path ends must lie on the spine".into());
        }
        let mut inner = BTreeSet::new();
        for &d in &path[..path.len() - 1] {
            let v = head(d);
            if on(v) || !inner.insert(v) {
                return bad("path interior meets the spine or itself".into());
            }
        }
        Ok(())
    }

    /// Carrier darts of the edge of Γ ∪ path through carrier dart `d`.
    fn edge_through(&self, inside: &[bool], d: usize) -> Vec<usize> {
        let vertex_of = self.carrier.vertex_of();
        let n = inside.len();
        let mut valence = vec![0usize; n];
        for x in 0..n {
            if inside[x] {
                valence[vertex_of[x]] += 1;
            }
        }
        let opp = |x: usize| self.carrier.opp(x);
        let mut cells = vec![d];
        for start in [d, opp(d)] {
            let mut cur = start;
            while valence[vertex_of[opp(cur)]] == 2 {
                cur = self.next_inside(inside, opp(cur));
                if cur == d || cur == opp(d) {
                    break;
                }
                cells.push(cur);
            }
        }
        cells
    }

    /// Adds the path of cells and removes the edge of Γ ∪ path through
    /// carrier dart `out`, then prunes leaves.
    pub fn swap(&self, path: &[usize], out: usize) -> Result<CellularSpine> {
        self.check_path(path)?;
        let mut inside = self.inside.clone();
        for &d in path {
            inside[d] = true;
            inside[self.carrier.opp(d)] = true;
        }
        if out >= inside.len() || !inside[out] {
            return Err(MoveError::UnknownDart(out));
        }
        let cells = self.edge_through(&inside, out);
        if cells.iter().any(|c| path.contains(c) || path.contains(&self.carrier.opp(*c))) {
            return Err(MoveError::BadArc("the removed edge is the inserted path".into()));
        }
        let all: Vec<usize> = (0..inside.len()).filter(|&d| inside[d]).collect();
        let (g, id) = Spine::induced_with_map(&self.carrier, &all)
            .map_err(|d| MoveError::NotCellular(d.to_string()))?;
        let faces = face_orbits(&g);
        let face_of = |d: usize| faces.iter().position(|f| f.contains(&id[d])).unwrap();
        if face_of(out) == face_of(self.carrier.opp(out)) {
            return Err(MoveError::SameFaceBothSides);
        }
        for c in cells {
            inside[c] = false;
            inside[self.carrier.opp(c)] = false;
        }
        let vertex_of = self.carrier.vertex_of();
        loop {
            let leaf = (0..inside.len())
                .find(|&d| inside[d] && self.touches(&inside, &vertex_of, vertex_of[d]) == 1);
            match leaf {
                Some(d) => {
                    inside[d] = false;
                    inside[self.carrier.opp(d)] = false;
                }
                None => break,
            }
        }
        let c = CellularSpine { carrier: self.carrier.clone(), inside };
        c.check()?;
        Ok(c)
    }

    /// The same swap on the intrinsic spine of `chains`.
    pub(crate) fn intrinsic_swap(&self, chains: &Chains, path: &[usize], out: usize) -> Result<SwapSpec> {
        let vertex_of = self.carrier.vertex_of();
        let opp = |d: usize| self.carrier.opp(d);
        // (spine dart giving the side or corner, index of the vertex along the even dart)
        let end = |arc_dart: usize| -> (Endpoint, usize, usize) {
            let c = self.next_inside(&self.inside, arc_dart);
            let (sd, j) = chains.info[c];
            let l = sd / 2;
            let k = chains.length[l];
            let branch = self.touches(&self.inside, &vertex_of, vertex_of[c]) >= 3;
            if branch {
                (Endpoint::Corner(sd), l, NONE)
            } else {
                let i = if sd % 2 == 0 { j } else { k - j };
                (Endpoint::Side(sd), l, i)
            }
        };
        let (mut e1, l1, i1) = end(path[0]);
        let (mut e2, l2, i2) = end(opp(path[path.len() - 1]));
        let (osd, oj) = chains.info[out];
        if osd == NONE {
            return Err(MoveError::UnknownDart(out));
        }
        let lo = osd / 2;
        let k = chains.length[lo];
        let cell = if osd % 2 == 0 { oj } else { k - 1 - oj };
        let mut cuts = Vec::new();
        if l1 == l2 && i1 != NONE && i2 != NONE && i1 != i2 {
            if i1 < i2 {
                e2 = Endpoint::SideAfter(e2.dart());
            } else {
                e1 = Endpoint::SideAfter(e1.dart());
            }
        }
        for (l, i) in [(l1, i1), (l2, i2)] {
            if l == lo && i != NONE && !cuts.contains(&i) {
                cuts.push(i);
            }
        }
        let before = cuts.iter().filter(|&&i| i <= cell).count();
        let e_out = match (cuts.len(), before) {
            (0, _) => OutEdge::Whole(lo),
            (_, 0) => OutEdge::Start(lo),
            (n, b) if b == n => OutEdge::End(lo),
            _ => OutEdge::Middle(lo),
        };
        Ok(SwapSpec { e_in: (e1, e2), e_out, new_edge: chains.spine.free_label() })
    }
}

/// An embedded disc made of faces of the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDisc {
    in_disc: Vec<bool>,
    face_of: Vec<usize>,
    /// Boundary darts in walking order, each with the disc on its left face.
    boundary: Vec<usize>,
}

impl CellDisc {
    pub fn new(carrier: &CombSurface, faces: &[usize]) -> Result<Self> {
        let all = carrier.faces();
        let face_of = carrier.face_of();
        let mut in_disc = vec![false; all.len()];
        for &f in faces {
            if f >= all.len() {
                return Err(MoveError::NotCellular(format!("face {f} does not exist")));
            }
            in_disc[f] = true;
        }
        let bad = |m: &str| Err(MoveError::NotCellular(m.into()));
        if !in_disc.iter().any(|&b| b) || in_disc.iter().all(|&b| b) {
            return bad("a disc needs some but not all faces");
        }
        let n = carrier.num_darts();
        let inner = |d: usize| in_disc[face_of[d]];
        let is_bd = |d: usize| inner(d) && !inner(carrier.opp(d));
        let Some(b0) = (0..n).find(|&d| is_bd(d)) else { return bad("disc has no boundary") };
        let mut boundary = vec![b0];
        loop {
            let last = *boundary.last().unwrap();
            let mut x = carrier.rot(carrier.opp(last));
            while !is_bd(x) {
                x = carrier.rot(x);
            }
            if x == b0 {
                break;
            }
            boundary.push(x);
        }
        if boundary.len() != (0..n).filter(|&d| is_bd(d)).count() {
            return bad("disc boundary has several components");
        }
        let vertex_of = carrier.vertex_of();
        let tails: BTreeSet<usize> = boundary.iter().map(|&d| vertex_of[d]).collect();
        if tails.len() != boundary.len() {
            return bad("disc boundary is not a simple closed curve");
        }
        let mut verts = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for d in 0..n {
            if inner(d) {
                verts.insert(vertex_of[d]);
                edges.insert(d.min(carrier.opp(d)));
            }
        }
        let chi = verts.len() as i64 - edges.len() as i64 + faces.len() as i64;
        if chi != 1 {
            return bad("faces do not form a disc");
        }
        Ok(CellDisc { in_disc, face_of, boundary })
    }

    /// Length of the boundary in 1-cells.
    pub fn boundary_length(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Both sides of the cell of `d` lie in the disc.
    pub fn interior_cell(&self, carrier: &CombSurface, d: usize) -> bool {
        self.in_disc[self.face_of[d]] && self.in_disc[self.face_of[carrier.opp(d)]]
    }

    /// Whether the cell of `d` lies in the closed disc.
    pub fn closed_cell(&self, carrier: &CombSurface, d: usize) -> bool {
        self.in_disc[self.face_of[d]] || self.in_disc[self.face_of[carrier.opp(d)]]
    }
}

/// Spine cells in the interior of the disc, and the number of pieces they
/// form there.
fn interior_measure(c: &CellularSpine, disc: &CellDisc) -> (usize, usize) {
    let carrier = c.carrier();
    let vertex_of = carrier.vertex_of();
    let on_boundary: BTreeSet<usize> = disc.boundary.iter().map(|&d| vertex_of[d]).collect();
    let cells: Vec<usize> = c
        .darts()
        .into_iter()
        .filter(|&d| d < carrier.opp(d) && disc.interior_cell(carrier, d))
        .collect();
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..cells.len() {
        for j in 0..i {
            let ends = |d: usize| [vertex_of[d], vertex_of[carrier.opp(d)]];
            let shared = ends(cells[i])
                .iter()
                .any(|v| !on_boundary.contains(v) && ends(cells[j]).contains(v));
            if shared {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let pieces = (0..cells.len()).filter(|&i| find(&mut parent, i) == i).count();
    (pieces, cells.len())
}

/// Arcs of the disc boundary that meet the spine only at their ends.
fn boundary_arcs(c: &CellularSpine, disc: &CellDisc) -> Vec<Vec<usize>> {
    let carrier = c.carrier();
    let vertex_of = carrier.vertex_of();
    let on: BTreeSet<usize> = c.darts().iter().map(|&d| vertex_of[d]).collect();
    let b = &disc.boundary;
    let k = b.len();
    let mut arcs = Vec::new();
    for s in 0..k {
        if !on.contains(&vertex_of[b[s]]) {
            continue;
        }
        let mut arc = Vec::new();
        for t in 0..k {
            let d = b[(s + t) % k];
            if c.contains(d) {
                break;
            }
            arc.push(d);
            if on.contains(&vertex_of[carrier.opp(d)]) {
                arcs.push(arc.clone());
                break;
            }
        }
    }
    arcs
}

/// Result of [`slide_spine_off_disc`].
#[derive(Debug, Clone)]
pub struct OffDisc {
    pub moves: MoveSeq,
    pub result: CellularSpine,
}

/// Swaps arcs of the disc boundary into the spine until the spine avoids the
/// interior of the disc.
pub fn slide_spine_off_disc(c: &CellularSpine, disc: &CellDisc) -> Result<OffDisc> {
    let carrier = c.carrier();
    if disc.in_disc.len() != carrier.faces().len() {
        return Err(MoveError::NotCellular("disc lives in another cell structure".into()));
    }
    let mut cur = c.clone();
    let mut moves = MoveSeq::new();
    loop {
        let m = interior_measure(&cur, disc);
        if m.1 == 0 {
            return Ok(OffDisc { moves, result: cur });
        }
        let mut best: Option<((usize, usize), Move, CellularSpine)> = None;
        for arc in boundary_arcs(&cur, disc) {
            let mut tried = BTreeSet::new();
            for d in cur.darts() {
                if !disc.interior_cell(carrier, d) {
                    continue;
                }
                let mut with = cur.inside.clone();
                for &a in &arc {
                    with[a] = true;
                    with[carrier.opp(a)] = true;
                }
                let key = cur.edge_through(&with, d).into_iter().map(|x| x.min(carrier.opp(x))).min();
                if !tried.insert(key) {
                    continue;
                }
                let Ok(next) = cur.swap(&arc, d) else { continue };
                let nm = interior_measure(&next, disc);
                if nm < m && best.as_ref().is_none_or(|b| nm < b.0) {
                    best = Some((nm, Move::CellSwap { out: d, path: arc.clone() }, next));
                }
            }
        }
        let Some((_, mv, next)) = best else {
            return Err(MoveError::NotCellular("no boundary arc swap reduces the spine inside the disc".into()));
        };
        moves.push(mv);
        cur = next;
    }
}

/// Cells of `a` missing from `b`, then cells in exactly one of them.
fn distance(a: &CellularSpine, b: &CellularSpine) -> (usize, usize) {
    let n = a.inside.len();
    let extra = (0..n).filter(|&d| a.inside[d] && !b.inside[d]).count() / 2;
    let sym = (0..n).filter(|&d| a.inside[d] != b.inside[d]).count() / 2;
    (extra, sym)
}

/// Paths of target cells leaving the current spine and returning to it,
/// meeting it only at their ends.
fn target_paths(cur: &CellularSpine, target: &CellularSpine) -> Vec<Vec<usize>> {
    let carrier = cur.carrier();
    let vertex_of = carrier.vertex_of();
    let on: BTreeSet<usize> = cur.darts().iter().map(|&d| vertex_of[d]).collect();
    let fresh: Vec<usize> = target.darts().into_iter().filter(|&d| !cur.contains(d)).collect();
    let mut out = Vec::new();
    for &d0 in &fresh {
        if !on.contains(&vertex_of[d0]) {
            continue;
        }
        // depth-first search, first success only
        let mut stack = vec![vec![d0]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            let head = vertex_of[carrier.opp(last)];
            if on.contains(&head) {
                if !out.contains(&path) {
                    out.push(path);
                }
                break;
            }
            let seen: BTreeSet<usize> = path.iter().map(|&d| vertex_of[d]).collect();
            for &d in fresh.iter().rev() {
                let next = vertex_of[carrier.opp(d)];
                if vertex_of[d] == head && d != carrier.opp(last) && (on.contains(&next) || !seen.contains(&next)) {
                    let mut p = path.clone();
                    p.push(d);
                    stack.push(p);
                }
            }
        }
    }
    out
}

/// Result of [`align_spines`].
#[derive(Debug, Clone)]
pub struct Alignment {
    /// Swaps inside the cell structure.
    pub cell_moves: MoveSeq,
    /// The same path as contractions and expansions of intrinsic spines.
    pub moves: MoveSeq,
    pub start: Spine,
    pub end: Spine,
}

fn translate(spec: &SwapSpec, phi: &[usize], new_edge: usize) -> SwapSpec {
    let flips = |d: usize| phi[d & !1] % 2 == 1;
    let map_end = |e: Endpoint| match e {
        Endpoint::Corner(d) => Endpoint::Corner(phi[d]),
        Endpoint::Side(d) => Endpoint::Side(phi[d]),
        Endpoint::SideAfter(d) => Endpoint::SideAfter(phi[d]),
    };
    let (mut a, mut b) = (map_end(spec.e_in.0), map_end(spec.e_in.1));
    // order along an edge is measured from its even dart
    let swap_order = |x: Endpoint, y: Endpoint| match (x, y) {
        (Endpoint::Side(p), Endpoint::SideAfter(q)) => (Endpoint::SideAfter(p), Endpoint::Side(q)),
        (Endpoint::SideAfter(p), Endpoint::Side(q)) => (Endpoint::Side(p), Endpoint::SideAfter(q)),
        other => other,
    };
    if let Endpoint::SideAfter(d) = spec.e_in.0 {
        if flips(d) {
            (a, b) = swap_order(a, b);
        }
    } else if let Endpoint::SideAfter(d) = spec.e_in.1 {
        if flips(d) {
            (a, b) = swap_order(a, b);
        }
    }
    let l = spec.e_out.label();
    let nl = phi[2 * l] / 2;
    let e_out = match (spec.e_out, flips(2 * l)) {
        (OutEdge::Whole(_), _) => OutEdge::Whole(nl),
        (OutEdge::Middle(_), _) => OutEdge::Middle(nl),
        (OutEdge::Start(_), false) | (OutEdge::End(_), true) => OutEdge::Start(nl),
        (OutEdge::Start(_), true) | (OutEdge::End(_), false) => OutEdge::End(nl),
    };
    SwapSpec { e_in: (a, b), e_out, new_edge }
}

/// Moves one cellular spine to another inside their common cell structure,
/// first by swaps along target cells, then rewritten as contractions and
/// expansions of the intrinsic spines.
pub fn align_spines(from: &CellularSpine, to: &CellularSpine) -> Result<Alignment> {
    if from.carrier != to.carrier {
        return Err(MoveError::NotCellular("spines live in different cell structures".into()));
    }
    let carrier = from.carrier();
    let mut cell_moves = MoveSeq::new();
    let mut cur = from.clone();
    while cur.inside != to.inside {
        let dist = distance(&cur, to);
        let mut best: Option<((usize, usize), Move, CellularSpine)> = None;
        for path in target_paths(&cur, to) {
            let mut with = cur.inside.clone();
            for &a in &path {
                with[a] = true;
                with[carrier.opp(a)] = true;
            }
            let mut tried = BTreeSet::new();
            for d in cur.darts() {
                if d > carrier.opp(d) {
                    continue;
                }
                let cells = cur.edge_through(&with, d);
                let key = cells.iter().map(|&x| x.min(carrier.opp(x))).min();
                if !tried.insert(key) || cells.iter().all(|&x| to.contains(x)) {
                    continue;
                }
                let Ok(next) = cur.swap(&path, d) else { continue };
                let nd = distance(&next, to);
                if nd.0 < dist.0 && best.as_ref().is_none_or(|b| nd < b.0) {
                    best = Some((nd, Move::CellSwap { out: d, path: path.clone() }, next));
                }
            }
        }
        let Some((_, mv, next)) = best else {
            return Err(MoveError::DecompositionFailed("no swap brings the spines closer".into()));
        };
        cell_moves.push(mv);
        cur = next;
    }

    let start = from.intrinsic();
    let mut state = start.clone();
    let mut moves = MoveSeq::new();
    let mut cur = from.clone();
    for mv in &cell_moves.moves {
        let Move::CellSwap { out, path } = mv else { unreachable!() };
        let chains = cur.chains();
        let spec = cur.intrinsic_swap(&chains, path, *out)?;
        let next = cur.swap(path, *out)?;
        let phi = isomorphisms(&chains.spine, &state)
            .into_iter()
            .next()
            .ok_or_else(|| MoveError::ReplayMismatch("intrinsic spines drifted apart".into()))?;
        let spec = translate(&spec, &phi, state.free_label());
        let seq = edge_swap_elementary(&state, &spec)?;
        state = seq.replay_spine(&state)?;
        if !state.same_up_to_relabeling(&next.intrinsic()) {
            return Err(MoveError::ReplayMismatch("elementary moves miss the cellular swap".into()));
        }
        moves.extend(seq);
        cur = next;
    }
    Ok(Alignment { cell_moves, moves, start, end: state })
}
