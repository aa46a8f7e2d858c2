use super::{colored_swap, edge_contract, edge_swap, Move, MoveError, MoveSeq, Result, SwapSpec};
use crate::surf::{is_isomorphic, DartMap, Spine};

const SPECIAL: u64 = u64::MAX;

#[derive(Clone)]
struct St {
    s: Spine,
    moves: Vec<Move>,
}

impl St {
    fn contract(&self, label: usize) -> Option<St> {
        let s = edge_contract(&self.s, label).ok()?;
        let mut moves = self.moves.clone();
        moves.push(Move::Contract { edge: label });
        Some(St { s, moves })
    }

    fn expand(&self, block1: Vec<usize>, block2: Vec<usize>, label: usize, color: u64) -> Option<St> {
        if block1.len() < 2 || block2.len() < 2 || self.s.edge_alive(label) {
            return None;
        }
        let vertex = self.s.vertex_id(block1[0]);
        let mut s = self.s.clone();
        s.expand_raw(&block1, &block2, label, color);
        let mut moves = self.moves.clone();
        moves.push(Move::Expand { vertex, block1, block2, new_edge: label });
        Some(St { s, moves })
    }

    fn is_special(&self, d: usize) -> bool {
        self.s.color(d) == SPECIAL
    }

    /// Non-special edge whose endpoints differ.
    fn contractible(&self, d: usize) -> bool {
        !self.is_special(d) && !self.s.around(d).contains(&(d ^ 1))
    }
}

/// Colors every edge of Γ minus `e3` by the maximal path of Γ − e3 through
/// its valence-2 vertices, and `e3` by `SPECIAL`.
fn path_colors(s: &Spine, e3: usize) -> Spine {
    let mut parent: Vec<usize> = (0..s.dart_bound() / 2).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for v in s.vertices() {
        let rest: Vec<usize> = v.into_iter().filter(|d| d / 2 != e3).collect();
        if rest.len() == 2 {
            let (x, y) = (find(&mut parent, rest[0] / 2), find(&mut parent, rest[1] / 2));
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut out = s.clone();
    for l in s.edges() {
        let c = if l == e3 { SPECIAL } else { 1 + find(&mut parent, l) as u64 };
        out.set_edge_color(l, c);
    }
    out
}

/// Puts dart `x` at a vertex of valence 3 whose other darts are not special.
fn prep(st: &St, x: usize) -> Option<St> {
    let mut st = st.clone();
    let v = st.s.around(x);
    if v.len() == 3 {
        if v.iter().all(|&d| d == x || !st.is_special(d)) {
            return Some(st);
        }
        let c = *v.iter().find(|&&d| d / 2 != x / 2)?;
        st = st.contract(c / 2)?;
    }
    let v = st.s.around(x);
    if v.len() < 4 {
        return None;
    }
    let label = st.s.free_label();
    let (s_rot, s_prev) = (st.s.rot(x), st.s.prev(x));
    let i = v.iter().position(|&d| d == x).unwrap();
    let cyc = |k: usize| v[(i + k) % v.len()];
    if s_rot != (x ^ 1) {
        let block2: Vec<usize> = (2..v.len()).map(cyc).collect();
        let c = st.s.color(s_rot);
        st.expand(vec![x, s_rot], block2, label, c)
    } else {
        let block2: Vec<usize> = (1..v.len() - 1).map(cyc).collect();
        let c = st.s.color(s_prev);
        st.expand(vec![s_prev, x], block2, label, c)
    }
}

/// Moves the end `x` of the special edge across the next edge in the given
/// direction by one contraction and one expansion.
fn slide(st: &St, x: usize, forward: bool) -> Option<St> {
    let v = st.s.around(x);
    if v.len() != 3 {
        return None;
    }
    let (q, p) = (v[1], v[2]);
    if st.is_special(q) || st.is_special(p) {
        return None;
    }
    let e = if forward { q } else { p };
    if !st.contractible(e) {
        return None;
    }
    let c = st.contract(e / 2)?;
    let m = c.s.around(x);
    // forward: (x, W1, .., Wm, p) ; backward: (x, q, V1, .., Vm)
    let k = m.len();
    let (b1, b2, carry) = if forward {
        (vec![x, m[1]], m[2..].to_vec(), m[1])
    } else {
        (vec![m[k - 1], x], m[1..k - 1].to_vec(), m[k - 1])
    };
    if c.is_special(carry) {
        return None;
    }
    let color = c.s.color(carry);
    c.expand(b1, b2, e / 2, color)
}

/// Optionally contracts one of the two other edges at the end `x`.
fn finish(st: &St, x: usize, which: usize) -> Option<St> {
    if which == 0 {
        return Some(st.clone());
    }
    let v = st.s.around(x);
    if v.len() != 3 {
        return None;
    }
    let e = v[which];
    if !st.contractible(e) {
        return None;
    }
    st.contract(e / 2)
}

/// Every placement of end `x` reachable by an optional preparation, up to
/// `limit` slides in one direction and an optional final contraction, using
/// fewer than `budget` moves in total. Sorted by length.
fn placements(st: &St, x: usize, limit: usize, budget: usize) -> Vec<St> {
    let mut out = vec![st.clone()];
    let Some(base) = prep(st, x) else { return out };
    for forward in [true, false] {
        let mut cur = Some(base.clone());
        for i in 0..=limit {
            let Some(c) = cur else { break };
            if c.moves.len() >= budget {
                break;
            }
            if i > 0 || forward {
                out.extend((0..3).filter_map(|which| finish(&c, x, which)).filter(|f| f.moves.len() < budget));
            }
            cur = slide(&c, x, forward);
        }
    }
    out.sort_by_key(|p| p.moves.len());
    out
}

fn signature(s: &Spine) -> (usize, Vec<usize>) {
    let mut val: Vec<usize> = s.vertices().iter().map(|v| v.len()).collect();
    val.sort_unstable();
    (s.num_edges(), val)
}

/// Writes an edge swap as a sequence of contractions and expansions. The
/// shortest sequence found by sliding the ends of the moving edge is
/// returned; the result is checked against the direct swap.
pub fn edge_swap_elementary(s: &Spine, spec: &SwapSpec) -> Result<MoveSeq> {
    let mut direct = edge_swap(s, spec)?;
    direct.clear_colors();
    let e3 = spec.e_out.label();
    let colored = path_colors(s, e3);
    let target = colored_swap(&colored, spec, SPECIAL)?;
    if is_isomorphic(&colored, &target) {
        return Ok(MoveSeq::new());
    }
    let (a, b) = (2 * e3, 2 * e3 + 1);
    let limit = s.num_edges() + 2;
    let sig = signature(&target);
    let start = St { s: colored, moves: Vec::new() };
    let mut best: Option<Vec<Move>> = None;
    for (x, y) in [(a, b), (b, a)] {
        let bound = |best: &Option<Vec<Move>>| best.as_ref().map_or(usize::MAX, |m| m.len());
        for sa in placements(&start, x, limit, bound(&best)) {
            if sa.moves.len() >= bound(&best) {
                break;
            }
            for sb in placements(&sa, y, limit, bound(&best)) {
                if sb.moves.len() >= bound(&best) {
                    break;
                }
                if signature(&sb.s) == sig && is_isomorphic(&sb.s, &target) {
                    best = Some(sb.moves);
                    break;
                }
            }
        }
    }
    let moves = best.ok_or_else(|| {
        MoveError::DecompositionFailed(format!("no slide sequence realises {spec:?}"))
    })?;
    let seq = MoveSeq { moves };
    let mut plain = s.clone();
    plain.clear_colors();
    let mut replayed = seq.replay_spine(&plain)?;
    replayed.clear_colors();
    if !replayed.same_up_to_relabeling(&direct) {
        return Err(MoveError::ReplayMismatch("elementary moves miss the swap result".into()));
    }
    Ok(seq)
}
