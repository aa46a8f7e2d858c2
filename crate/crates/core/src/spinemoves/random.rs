//! Random instances, driven by a caller-supplied picker `pick(n) ∈ 0..n`.

use std::collections::BTreeSet;

use super::{edge_swap, pachner, CellDisc, CellularSpine, Endpoint, OutEdge, PachnerMove, SwapSpec};
use crate::surf::{bouquet, spine_to_triangulation, triangulation_to_spine, CombSurface, DartMap, Spine, Triangulation2};

pub type Pick<'a> = &'a mut dyn FnMut(usize) -> usize;

/// Applies `flips` random 2-2 moves to the standard one-vertex triangulation.
pub fn one_vertex_triangulation(g: usize, flips: usize, pick: Pick) -> Triangulation2 {
    let mut t = spine_to_triangulation(&bouquet(g).expanded_to_trivalent()).expect("standard spine is trivalent");
    for _ in 0..flips {
        let d = pick(t.surface().num_darts());
        if let Ok((nt, _)) = pachner(&t, PachnerMove::Flip22(d)) {
            t = nt;
        }
    }
    t
}

pub fn trivalent_spine(g: usize, flips: usize, pick: Pick) -> Spine {
    triangulation_to_spine(&one_vertex_triangulation(g, flips, pick)).expect("one-vertex triangulation")
}

/// A triangulation with `1 + splits` vertices.
pub fn triangulation(g: usize, splits: usize, flips: usize, pick: Pick) -> Triangulation2 {
    let mut t = one_vertex_triangulation(g, flips, pick);
    for _ in 0..splits {
        let d = pick(t.surface().num_darts());
        t = pachner(&t, PachnerMove::Split13(d)).expect("1-3 always applies").0;
        for _ in 0..flips / 2 + 1 {
            let d = pick(t.surface().num_darts());
            if let Ok((nt, _)) = pachner(&t, PachnerMove::Flip22(d)) {
                t = nt;
            }
        }
    }
    t
}

/// The cells off a random spanning tree of the dual graph, with leaves pruned.
pub fn cellular_spine(carrier: &CombSurface, pick: Pick) -> CellularSpine {
    let n = carrier.num_darts();
    let face_of = carrier.face_of();
    let nf = carrier.faces().len();
    let mut in_tree = vec![false; nf];
    let mut tree_cell = vec![false; n];
    in_tree[pick(nf)] = true;
    let mut grown = 1;
    while grown < nf {
        let frontier: Vec<usize> = (0..n)
            .filter(|&d| in_tree[face_of[d]] && !in_tree[face_of[carrier.opp(d)]])
            .collect();
        let d = frontier[pick(frontier.len())];
        tree_cell[d] = true;
        tree_cell[carrier.opp(d)] = true;
        in_tree[face_of[carrier.opp(d)]] = true;
        grown += 1;
    }
    let mut inside: Vec<bool> = tree_cell.iter().map(|&t| !t).collect();
    let vertex_of = carrier.vertex_of();
    loop {
        let leaf = (0..n).find(|&d| inside[d] && (0..n).filter(|&x| inside[x] && vertex_of[x] == vertex_of[d]).count() == 1);
        match leaf {
            Some(d) => {
                inside[d] = false;
                inside[carrier.opp(d)] = false;
            }
            None => break,
        }
    }
    let darts: Vec<usize> = (0..n).filter(|&d| inside[d]).collect();
    CellularSpine::new(carrier.clone(), &darts).expect("cotree of a dual spanning tree is a cellular spine")
}

/// A disc of up to `size` faces grown from a random embedded face, if the
/// carrier has one.
pub fn disc(carrier: &CombSurface, size: usize, pick: Pick) -> Option<CellDisc> {
    let n = carrier.num_darts();
    let face_of = carrier.face_of();
    let nf = carrier.faces().len();
    let embedded: Vec<usize> = (0..nf).filter(|&f| CellDisc::new(carrier, &[f]).is_ok()).collect();
    if embedded.is_empty() {
        return None;
    }
    let mut faces = BTreeSet::from([embedded[pick(embedded.len())]]);
    let mut best = CellDisc::new(carrier, &faces.iter().copied().collect::<Vec<_>>()).ok()?;
    for _ in 0..4 * size {
        if faces.len() >= size {
            break;
        }
        let frontier: Vec<usize> = (0..n)
            .filter(|&d| faces.contains(&face_of[d]) && !faces.contains(&face_of[carrier.opp(d)]))
            .collect();
        if frontier.is_empty() {
            break;
        }
        let f = face_of[carrier.opp(frontier[pick(frontier.len())])];
        let mut trial = faces.clone();
        trial.insert(f);
        if let Ok(d) = CellDisc::new(carrier, &trial.iter().copied().collect::<Vec<_>>()) {
            faces = trial;
            best = d;
        }
    }
    Some(best)
}

/// A random valid edge swap on `s`.
pub fn swap(s: &Spine, pick: Pick) -> SwapSpec {
    let darts = s.darts();
    loop {
        let end = |pick: Pick| {
            let d = darts[pick(darts.len())];
            if pick(2) == 0 {
                Endpoint::Corner(d)
            } else {
                Endpoint::Side(d)
            }
        };
        let a = end(pick);
        let b = end(pick);
        let l = darts[pick(darts.len())] / 2;
        let cut = [a, b].iter().any(|e| matches!(e, Endpoint::Side(d) if d / 2 == l));
        let e_out = match (cut, pick(2)) {
            (false, _) => OutEdge::Whole(l),
            (true, 0) => OutEdge::Start(l),
            (true, _) => OutEdge::End(l),
        };
        let spec = SwapSpec { e_in: (a, b), e_out, new_edge: s.free_label() };
        if edge_swap(s, &spec).is_ok() {
            return spec;
        }
    }
}
