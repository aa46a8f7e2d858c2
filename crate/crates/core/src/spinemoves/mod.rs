//! Elementary spine moves, edge swaps, Pachner moves and their replayable
//! move sequences.

mod cellular;
mod elementary;
mod pachner;
pub mod random;

use std::fmt;

use thiserror::Error;

use crate::surf::{CombSurface, DartMap, Spine, SpineDiagnostic, SurfError, Triangulation2, NONE};

pub use cellular::{align_spines, slide_spine_off_disc, Alignment, CellDisc, CellularSpine, OffDisc};
pub use elementary::edge_swap_elementary;
pub use pachner::{pachner, pachner_as_spine_moves, PachnerMove};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("LoopEdge: edge e{0} joins a vertex to itself")]
    LoopEdge(usize),
    #[error("BadPartition: {0}")]
    BadPartition(String),
    #[error("SameFaceBothSides: edge has the same complementary region on both sides")]
    SameFaceBothSides,
    #[error("BadArc: {0}")]
    BadArc(String),
    #[error("UnknownEdge: e{0}")]
    UnknownEdge(usize),
    #[error("UnknownDart: d{0}")]
    UnknownDart(usize),
    #[error("SameTriangleBothSides: edge of dart d{0} has one triangle on both sides")]
    SameTriangleBothSides(usize),
    #[error("NotValence3: vertex of dart d{0}")]
    NotValence3(usize),
    #[error("NotOneVertex: triangulation has {0} vertices")]
    NotOneVertex(usize),
    #[error("ComplementNotDisc: {0}")]
    ComplementNotDisc(SpineDiagnostic),
    #[error("NotCellular: {0}")]
    NotCellular(String),
    #[error("DecompositionFailed: {0}")]
    DecompositionFailed(String),
    #[error("ReplayMismatch: {0}")]
    ReplayMismatch(String),
    #[error("WrongObject: {0}")]
    WrongObject(String),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error(transparent)]
    Surf(#[from] SurfError),
}

pub type Result<T> = std::result::Result<T, MoveError>;

/// Where an inserted arc meets the spine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// At a vertex, in the corner just before dart `d` in rotation order.
    Corner(usize),
    /// At an interior point of the edge of dart `d`, on the side swept by the
    /// boundary walk that runs along `d`.
    Side(usize),
    /// Like `Side`, on the edge of the other endpoint's `Side`, at a point
    /// strictly beyond it towards the head of the edge's even dart.
    SideAfter(usize),
}

impl Endpoint {
    pub fn dart(&self) -> usize {
        match *self {
            Endpoint::Corner(d) | Endpoint::Side(d) | Endpoint::SideAfter(d) => d,
        }
    }
}

/// Which edge of Γ ∪ e_in is removed: a whole edge of Γ, or, when an arc
/// endpoint subdivides it, the piece touching the tail of dart `2L` (Start)
/// or of dart `2L+1` (End).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutEdge {
    Whole(usize),
    Start(usize),
    End(usize),
    /// The piece between two arc endpoints on the same edge.
    Middle(usize),
}

impl OutEdge {
    pub fn label(&self) -> usize {
        match *self {
            OutEdge::Whole(l) | OutEdge::Start(l) | OutEdge::End(l) | OutEdge::Middle(l) => l,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwapSpec {
    pub e_in: (Endpoint, Endpoint),
    pub e_out: OutEdge,
    /// Label given to the inserted edge.
    pub new_edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    Contract { edge: usize },
    Expand { vertex: usize, block1: Vec<usize>, block2: Vec<usize>, new_edge: usize },
    Swap(SwapSpec),
    /// Swap inside a cell structure: add a path of cells, drop the spine edge
    /// through carrier dart `out`.
    CellSwap { out: usize, path: Vec<usize> },
    Pachner(PachnerMove),
}

fn fmt_endpoint(e: &Endpoint) -> String {
    match e {
        Endpoint::Corner(d) => format!("c{d}"),
        Endpoint::Side(d) => format!("s{d}"),
        Endpoint::SideAfter(d) => format!("s{d}+"),
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Move::Contract { edge } => write!(f, "contract e{edge}"),
            Move::Expand { vertex, block1, block2, new_edge } => {
                write!(f, "expand v{vertex} [{}|{}] new=e{new_edge}", list(block1), list(block2))
            }
            Move::Swap(s) => {
                let out = match s.e_out {
                    OutEdge::Whole(l) => format!("e{l}"),
                    OutEdge::Start(l) => format!("e{l}.0"),
                    OutEdge::End(l) => format!("e{l}.1"),
                    OutEdge::Middle(l) => format!("e{l}.m"),
                };
                write!(
                    f,
                    "swap out={out} in={},{} new=e{}",
                    fmt_endpoint(&s.e_in.0),
                    fmt_endpoint(&s.e_in.1),
                    s.new_edge
                )
            }
            Move::CellSwap { out, path } => write!(f, "cswap out=d{out} in={}", list(path)),
            Move::Pachner(p) => write!(f, "{p}"),
        }
    }
}

fn parse_num(s: &str, prefix: &str) -> Result<usize> {
    s.strip_prefix(prefix)
        .unwrap_or(s)
        .parse()
        .map_err(|_| MoveError::Parse(format!("bad number '{s}'")))
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_num(x.trim(), "d")).collect()
}

fn parse_endpoint(s: &str) -> Result<Endpoint> {
    if let Some(r) = s.strip_prefix('c') {
        Ok(Endpoint::Corner(parse_num(r, "")?))
    } else if let Some(r) = s.strip_prefix('s') {
        match r.strip_suffix('+') {
            Some(r) => Ok(Endpoint::SideAfter(parse_num(r, "")?)),
            None => Ok(Endpoint::Side(parse_num(r, "")?)),
        }
    } else {
        Err(MoveError::Parse(format!("bad endpoint '{s}'")))
    }
}

impl std::str::FromStr for Move {
    type Err = MoveError;

    fn from_str(line: &str) -> Result<Move> {
        let bad = || MoveError::Parse(format!("bad move '{line}'"));
        let mut words = line.split_whitespace();
        let kind = words.next().ok_or_else(bad)?;
        let rest: Vec<&str> = words.collect();
        let kv = |key: &str| -> Option<&str> {
            rest.iter().find_map(|w| w.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        };
        match kind {
            "contract" => Ok(Move::Contract { edge: parse_num(rest.first().ok_or_else(bad)?, "e")? }),
            "expand" => {
                let vertex = parse_num(rest.first().ok_or_else(bad)?, "v")?;
                let blocks = rest.get(1).ok_or_else(bad)?;
                let inner = blocks.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
                let (b1, b2) = inner.split_once('|').ok_or_else(bad)?;
                let new_edge = parse_num(kv("new").ok_or_else(bad)?, "e")?;
                Ok(Move::Expand { vertex, block1: parse_list(b1)?, block2: parse_list(b2)?, new_edge })
            }
            "swap" => {
                let out = kv("out").ok_or_else(bad)?;
                let out = out.strip_prefix('e').ok_or_else(bad)?;
                let e_out = if let Some(l) = out.strip_suffix(".0") {
                    OutEdge::Start(parse_num(l, "")?)
                } else if let Some(l) = out.strip_suffix(".1") {
                    OutEdge::End(parse_num(l, "")?)
                } else if let Some(l) = out.strip_suffix(".m") {
                    OutEdge::Middle(parse_num(l, "")?)
                } else {
                    OutEdge::Whole(parse_num(out, "")?)
                };
                let (a, b) = kv("in").ok_or_else(bad)?.split_once(',').ok_or_else(bad)?;
                let new_edge = parse_num(kv("new").ok_or_else(bad)?, "e")?;
                Ok(Move::Swap(SwapSpec {
                    e_in: (parse_endpoint(a)?, parse_endpoint(b)?),
                    e_out,
                    new_edge,
                }))
            }
            "cswap" => Ok(Move::CellSwap {
                out: parse_num(kv("out").ok_or_else(bad)?, "d")?,
                path: parse_list(kv("in").ok_or_else(bad)?)?,
            }),
            "p22" | "p13" | "p31" => {
                let d = parse_num(rest.first().ok_or_else(bad)?, "d")?;
                Ok(Move::Pachner(match kind {
                    "p22" => PachnerMove::Flip22(d),
                    "p13" => PachnerMove::Split13(d),
                    _ => PachnerMove::Merge31(d),
                }))
            }
            _ => Err(bad()),
        }
    }
}

/// An ordered list of moves, replayable from a start object.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MoveSeq {
    pub moves: Vec<Move>,
}

/// The object a move sequence acts on.
#[derive(Debug, Clone)]
pub enum MoveTarget {
    Spine(Spine),
    Cellular(CellularSpine),
    Triangulation(Triangulation2),
}

impl MoveSeq {
    pub fn new() -> Self {
        MoveSeq::default()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, m: Move) {
        self.moves.push(m);
    }

    pub fn extend(&mut self, other: MoveSeq) {
        self.moves.extend(other.moves);
    }

    /// Number of contractions and expansions.
    pub fn elementary_count(&self) -> usize {
        self.moves
            .iter()
            .filter(|m| matches!(m, Move::Contract { .. } | Move::Expand { .. }))
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("moves: {}\n", self.moves.len());
        for m in &self.moves {
            s.push_str(&m.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<MoveSeq> {
        let mut moves = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() || line.starts_with("moves:") || line.starts_with("format:") {
                continue;
            }
            moves.push(line.parse()?);
        }
        Ok(MoveSeq { moves })
    }

    /// Replays on an intrinsic spine.
    pub fn replay_spine(&self, start: &Spine) -> Result<Spine> {
        let mut s = start.clone();
        for m in &self.moves {
            s = apply_spine_move(&s, m)?;
        }
        Ok(s)
    }

    pub fn replay(&self, start: &MoveTarget) -> Result<MoveTarget> {
        match start {
            MoveTarget::Spine(s) => self.replay_spine(s).map(MoveTarget::Spine),
            MoveTarget::Cellular(c) => {
                let mut c = c.clone();
                for m in &self.moves {
                    match m {
                        Move::CellSwap { out, path } => c = c.swap(path, *out)?,
                        other => return Err(MoveError::WrongObject(format!("{other} on a cellular spine"))),
                    }
                }
                Ok(MoveTarget::Cellular(c))
            }
            MoveTarget::Triangulation(t) => {
                let mut t = t.clone();
                for m in &self.moves {
                    match m {
                        Move::Pachner(p) => t = pachner(&t, *p)?.0,
                        other => return Err(MoveError::WrongObject(format!("{other} on a triangulation"))),
                    }
                }
                Ok(MoveTarget::Triangulation(t))
            }
        }
    }
}

pub fn apply_spine_move(s: &Spine, m: &Move) -> Result<Spine> {
    match m {
        Move::Contract { edge } => edge_contract(s, *edge),
        Move::Expand { vertex, block1, block2, new_edge } => {
            if !block1.is_empty() && s.alive(block1[0]) && s.vertex_id(block1[0]) != *vertex {
                return Err(MoveError::BadPartition(format!("dart {} is not at v{vertex}", block1[0])));
            }
            edge_expand(s, block1, block2, Some(*new_edge))
        }
        Move::Swap(spec) => edge_swap(s, spec),
        other => Err(MoveError::WrongObject(format!("{other} on an intrinsic spine"))),
    }
}

fn check_edge(s: &Spine, label: usize) -> Result<()> {
    if s.edge_alive(label) {
        Ok(())
    } else {
        Err(MoveError::UnknownEdge(label))
    }
}

/// Collapses an edge joining distinct vertices.
pub fn edge_contract(s: &Spine, label: usize) -> Result<Spine> {
    check_edge(s, label)?;
    let a = 2 * label;
    if s.around(a).contains(&(a + 1)) {
        return Err(MoveError::LoopEdge(label));
    }
    let mut out = s.clone();
    out.contract_raw(label);
    out.normalize_raw();
    Ok(out)
}

/// Splits a vertex whose rotation reads `block1` then `block2` into two
/// vertices joined by a new edge; each block needs at least two darts.
pub fn edge_expand(s: &Spine, block1: &[usize], block2: &[usize], new_edge: Option<usize>) -> Result<Spine> {
    if block1.len() < 2 || block2.len() < 2 {
        return Err(MoveError::BadPartition("each block needs at least two darts".into()));
    }
    let first = block1[0];
    if !s.alive(first) {
        return Err(MoveError::UnknownDart(first));
    }
    let around = s.around(first);
    let listed: Vec<usize> = block1.iter().chain(block2.iter()).copied().collect();
    if around != listed {
        return Err(MoveError::BadPartition(format!(
            "blocks {listed:?} do not follow the rotation {around:?}"
        )));
    }
    let label = new_edge.unwrap_or_else(|| s.free_label());
    if s.edge_alive(label) {
        return Err(MoveError::BadPartition(format!("edge e{label} already exists")));
    }
    let mut out = s.clone();
    out.expand_raw(block1, block2, label, 0);
    Ok(out)
}

/// Turns an embedded graph with one-disc complement into a spine by pruning
/// leaves and amalgamating valence-2 vertices.
pub fn normalize_spine(carrier: &CombSurface, darts: &[usize]) -> Result<Spine> {
    let mut sub = Spine::induced(carrier, darts).map_err(MoveError::ComplementNotDisc)?;
    let faces = sub.faces().len();
    if faces != 1 {
        return Err(MoveError::ComplementNotDisc(SpineDiagnostic::ComplementFaces(faces)));
    }
    let chi = carrier.euler_characteristic();
    let graph_chi = sub.num_vertices() as i64 - sub.num_edges() as i64;
    if graph_chi + 1 != chi {
        return Err(MoveError::ComplementNotDisc(SpineDiagnostic::ComplementNotDisc {
            euler: graph_chi,
            expected: chi,
        }));
    }
    sub.normalize_raw();
    sub.diagnose_against(chi).map_err(MoveError::ComplementNotDisc)?;
    Ok(sub)
}

/// State of an edge swap after the arc is inserted and before the old edge
/// is removed.
pub(crate) struct SwapStage {
    pub graph: Spine,
    /// Label of the piece to remove.
    pub out_piece: usize,
}

fn pick_temp_label(s: &Spine, avoid: &[usize]) -> usize {
    (0..).find(|l| !s.edge_alive(*l) && !avoid.contains(l)).unwrap()
}

/// Inserts the arc of a swap and resolves which piece is removed.
pub(crate) fn swap_stage(s: &Spine, spec: &SwapSpec, arc_color: u64) -> Result<SwapStage> {
    let (p, q) = spec.e_in;
    for e in [p, q] {
        let d = e.dart();
        if d >= s.dart_bound() || !s.alive(d) {
            return Err(MoveError::UnknownDart(d));
        }
    }
    if s.edge_alive(spec.new_edge) {
        return Err(MoveError::BadArc(format!("edge e{} already exists", spec.new_edge)));
    }
    let out_label = spec.e_out.label();
    check_edge(s, out_label)?;
    let (first, second, flipped) = match (p, q) {
        (Endpoint::SideAfter(_), Endpoint::SideAfter(_)) => {
            return Err(MoveError::BadArc("at most one endpoint may be placed after the other".into()))
        }
        (Endpoint::SideAfter(_), _) => (q, p, true),
        _ => (p, q, false),
    };
    let mut g = s.clone();
    let mut avoid = vec![spec.new_edge];
    // a dart moved to a subdivision point is replaced at its old vertex by `.1`
    let mut moved: Vec<(usize, usize)> = Vec::new();
    let mut sub = |g: &mut Spine, d: usize| -> usize {
        let n = pick_temp_label(g, &avoid);
        avoid.push(n);
        g.subdivide_raw(d, n);
        moved.push((d ^ 1, 2 * n + 1));
        n
    };
    let c_first;
    let mut first_sub: Option<(usize, usize)> = None;
    match first {
        Endpoint::Corner(d) => c_first = d,
        Endpoint::Side(d) => {
            let n = sub(&mut g, d);
            first_sub = Some((d, n));
            c_first = 2 * n;
        }
        Endpoint::SideAfter(_) => unreachable!(),
    }
    let c_second = match second {
        Endpoint::Corner(d) => d,
        Endpoint::Side(d) => match first {
            Endpoint::Side(x) if x == d => {
                return Err(MoveError::BadArc("both endpoints at one point on one side".into()))
            }
            Endpoint::Side(x) if x == (d ^ 1) => d,
            _ => 2 * sub(&mut g, d),
        },
        Endpoint::SideAfter(y) => {
            let Some((x, n)) = first_sub else {
                return Err(MoveError::BadArc("an after-endpoint needs a side endpoint on its edge".into()));
            };
            // beyond the first point towards the head of the even dart
            let t = if y / 2 != x / 2 {
                NONE
            } else if x % 2 == 0 {
                2 * n + y % 2
            } else {
                y
            };
            if t == NONE {
                return Err(MoveError::BadArc("an after-endpoint needs a side endpoint on its edge".into()));
            };
            2 * sub(&mut g, t)
        }
    };
    let resolve = |mut c: usize| {
        while let Some(m) = moved.iter().find(|m| m.0 == c) {
            c = m.1;
        }
        c
    };
    // the first side corner moves if its edge is subdivided again
    let c_first = resolve(c_first);
    let c_second = match second {
        Endpoint::Corner(_) => resolve(c_second),
        _ => c_second,
    };
    let (mut c1, mut c2) = (c_first, c_second);
    if flipped {
        std::mem::swap(&mut c1, &mut c2);
    }
    if c1 == c2 {
        return Err(MoveError::BadArc("arc endpoints share a corner".into()));
    }
    // pieces of the cut edge in order from the tail of dart 2L
    let mut pieces = Vec::new();
    let mut d = resolve(2 * out_label);
    loop {
        pieces.push(d / 2);
        let far = d ^ 1;
        let at = g.around(far);
        // spine vertices have valence at least 3, so these are subdivision points
        if at.len() == 2 {
            d = at[1];
        } else {
            break;
        }
    }
    g.add_edge_raw(c1, c2, spec.new_edge, arc_color);
    let out_piece = match (spec.e_out, pieces.len()) {
        (OutEdge::Whole(l), 1) => l,
        (OutEdge::Whole(_), _) => return Err(MoveError::BadArc("e_out is subdivided; name a piece".into())),
        (_, 1) => return Err(MoveError::BadArc("e_out is not subdivided by the arc".into())),
        (OutEdge::Start(_), _) => pieces[0],
        (OutEdge::End(_), k) => pieces[k - 1],
        (OutEdge::Middle(_), 3) => pieces[1],
        (OutEdge::Middle(_), _) => return Err(MoveError::BadArc("e_out has no middle piece".into())),
    };
    if g.faces().len() != 2 {
        return Err(MoveError::BadArc("arc does not run through the complementary disc".into()));
    }
    Ok(SwapStage { graph: g, out_piece })
}

/// Removes one edge of Γ ∪ e_in that has distinct faces on its two sides and
/// keeps e_in.
pub fn edge_swap(s: &Spine, spec: &SwapSpec) -> Result<Spine> {
    colored_swap(s, spec, 0)
}

pub(crate) fn colored_swap(s: &Spine, spec: &SwapSpec, arc_color: u64) -> Result<Spine> {
    let SwapStage { mut graph, out_piece } = swap_stage(s, spec, arc_color)?;
    let faces = crate::surf::face_orbits(&graph);
    let face_of = |d: usize| faces.iter().position(|f| f.contains(&d)).unwrap();
    if face_of(2 * out_piece) == face_of(2 * out_piece + 1) {
        return Err(MoveError::SameFaceBothSides);
    }
    graph.remove_edge_raw(out_piece);
    graph.normalize_raw();
    if let Err(d) = graph.diagnose() {
        return Err(MoveError::ComplementNotDisc(d));
    }
    Ok(graph)
}
