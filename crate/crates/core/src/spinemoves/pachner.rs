use std::fmt;

use super::{Move, MoveError, MoveSeq, Result};
use crate::surf::{check_triangulation, CombSurface, DartMap, Spine, Triangulation2, NONE};

/// A two-dimensional Pachner move, addressed by a dart of the triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PachnerMove {
    /// Flip the edge of this dart.
    Flip22(usize),
    /// Cone the triangle on the left of this dart to a new vertex.
    Split13(usize),
    /// Remove the valence-3 vertex at the tail of this dart.
    Merge31(usize),
}

impl fmt::Display for PachnerMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PachnerMove::Flip22(d) => write!(f, "p22 d{d}"),
            PachnerMove::Split13(d) => write!(f, "p13 d{d}"),
            PachnerMove::Merge31(d) => write!(f, "p31 d{d}"),
        }
    }
}

/// Applies a Pachner move. Returns the new triangulation and the old-to-new
/// dart map (`NONE` for removed darts). Flips keep every dart id.
pub fn pachner(t: &Triangulation2, mv: PachnerMove) -> Result<(Triangulation2, Vec<usize>)> {
    let m = t.surface();
    let n = m.num_darts();
    let dart = match mv {
        PachnerMove::Flip22(d) | PachnerMove::Split13(d) | PachnerMove::Merge31(d) => d,
    };
    if dart >= n {
        return Err(MoveError::UnknownDart(dart));
    }
    let mut opp = m.opp_perm().to_vec();
    let mut rot = m.rot_perm().to_vec();
    let fnext = |d: usize| m.face_next(d);
    let map: Vec<usize>;
    match mv {
        PachnerMove::Flip22(d) => {
            let dp = opp[d];
            let (d1, e1) = (fnext(d), fnext(dp));
            let (d2, e2) = (fnext(d1), fnext(e1));
            if [d, d1, d2].contains(&dp) {
                return Err(MoveError::SameTriangleBothSides(d));
            }
            rot[opp[d2]] = e1;
            rot[opp[e2]] = d1;
            rot[opp[d1]] = d;
            rot[d] = d2;
            rot[opp[e1]] = dp;
            rot[dp] = e2;
            map = (0..n).collect();
        }
        PachnerMove::Split13(d) => {
            let d1 = fnext(d);
            let d2 = fnext(d1);
            let (ma, am, mb, bm, mc, cm) = (n, n + 1, n + 2, n + 3, n + 4, n + 5);
            opp.extend([am, ma, bm, mb, cm, mc]);
            rot.extend([NONE; 6]);
            rot[opp[d]] = bm;
            rot[bm] = d1;
            rot[opp[d2]] = am;
            rot[am] = d;
            rot[opp[d1]] = cm;
            rot[cm] = d2;
            rot[mb] = ma;
            rot[ma] = mc;
            rot[mc] = mb;
            map = (0..n).collect();
        }
        PachnerMove::Merge31(s0) => {
            let spokes = [s0, rot[s0], rot[rot[s0]]];
            if rot[spokes[2]] != s0 || spokes[0] == spokes[1] || spokes[1] == spokes[2] {
                return Err(MoveError::NotValence3(s0));
            }
            if spokes.iter().any(|&s| spokes.contains(&opp[s])) {
                return Err(MoveError::NotValence3(s0));
            }
            let faces = m.face_of();
            let f: Vec<usize> = spokes.iter().map(|&s| faces[s]).collect();
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(MoveError::NotValence3(s0));
            }
            for &s in &spokes {
                let t = opp[s];
                let p = (0..n).find(|&x| rot[x] == t).unwrap();
                rot[p] = rot[t];
                rot[t] = NONE;
                rot[s] = NONE;
            }
            let mut mp = vec![NONE; n];
            let mut next = 0;
            for (d, slot) in mp.iter_mut().enumerate() {
                if rot[d] != NONE {
                    *slot = next;
                    next += 1;
                }
            }
            let mut o2 = vec![0; next];
            let mut r2 = vec![0; next];
            for d in 0..n {
                if mp[d] != NONE {
                    o2[mp[d]] = mp[opp[d]];
                    r2[mp[d]] = mp[rot[d]];
                }
            }
            opp = o2;
            rot = r2;
            map = mp;
        }
    }
    let surface = CombSurface::from_parts_unchecked(opp, rot);
    check_triangulation(&surface, None)?;
    Ok((Triangulation2::new_unchecked(surface), map))
}

/// Replays a path of flips on a one-vertex triangulation as contractions and
/// expansions of the dual spine, two moves per flip. Returns the dual spine
/// of the start, the moves, and the end triangulation.
pub fn pachner_as_spine_moves(
    t0: &Triangulation2,
    flips: &[usize],
) -> Result<(Spine, MoveSeq, Triangulation2)> {
    let v = t0.num_vertices();
    if v != 1 {
        return Err(MoveError::NotOneVertex(v));
    }
    let dual = t0.surface().dual();
    let all: Vec<usize> = (0..dual.num_darts()).collect();
    let (start, id) = Spine::induced_with_map(&dual, &all).map_err(MoveError::ComplementNotDisc)?;
    let mut t = t0.clone();
    let mut s = start.clone();
    let mut seq = MoveSeq::new();
    for &d in flips {
        let (nt, _) = pachner(&t, PachnerMove::Flip22(d))?;
        let m = nt.surface();
        let dp = m.opp(d);
        let (e2, d1) = (m.face_next(d), m.face_next(m.face_next(d)));
        let (d2, e1) = (m.face_next(dp), m.face_next(m.face_next(dp)));
        let sd = id[d];
        let label = sd / 2;
        let contract = Move::Contract { edge: label };
        s = super::apply_spine_move(&s, &contract)?;
        let (block1, block2) = if sd % 2 == 0 {
            (vec![id[e2], id[d1]], vec![id[d2], id[e1]])
        } else {
            (vec![id[d2], id[e1]], vec![id[e2], id[d1]])
        };
        let expand = Move::Expand { vertex: s.vertex_id(block1[0]), block1, block2, new_edge: label };
        s = super::apply_spine_move(&s, &expand)?;
        seq.push(contract);
        seq.push(expand);
        t = nt;
    }
    Ok((start, seq, t))
}
