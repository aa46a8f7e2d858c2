//! Random train tracks and measures, driven by a picker `pick(n) ∈ 0..n`.

use num_bigint::BigInt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{positive_solution, Measure, TrainTrack};
use crate::numfield::{NumberField, NumberFieldElement};
use crate::spinemoves::random::{triangulation, Pick};
use crate::spinemoves::{pachner, PachnerMove};
use crate::surf::{vertex_orbits, DartMap, Triangulation2, NONE};

/// Track dual to a random triangulation of genus `g` with `1 + splits`
/// vertices, smoothed so that every region has at least three cusps and the
/// switch equations have a positive solution. `None` if no attempt succeeds.
pub fn track(g: usize, splits: usize, pick: Pick) -> Option<TrainTrack> {
    for _ in 0..200 {
        let Some(t) = raise_degrees(triangulation(g, splits, 2 * g + 4, pick), pick) else { continue };
        let m = t.surface().dual();
        let n = m.num_darts();
        let mut label = vec![NONE; n];
        let mut next = 0;
        for d in 0..n {
            if label[d] == NONE {
                label[d] = next;
                label[m.opp(d)] = next + 1;
                next += 2;
            }
        }
        let mut rot = vec![0; n];
        for d in 0..n {
            rot[label[d]] = label[m.rot(d)];
        }
        let switches: Vec<Vec<usize>> = vertex_orbits(&TrainTrack::raw(rot.clone(), vec![false; n], Vec::new()));
        let mut lone = vec![false; n];
        for v in &switches {
            lone[v[pick(3)]] = true;
        }
        if let Some(tt) = repair(rot, lone, pick) {
            if super::is_recurrent(&tt) {
                return Some(tt);
            }
        }
    }
    None
}

/// Flips edges opposite low-degree vertices until every vertex has degree
/// at least 4.
fn raise_degrees(mut t: Triangulation2, pick: Pick) -> Option<Triangulation2> {
    for _ in 0..200 {
        let m = t.surface();
        let vs = m.vertices();
        let mut deg = vec![0; m.num_darts()];
        for v in &vs {
            for &d in v {
                deg[d] = v.len();
            }
        }
        let low: Vec<usize> = (0..m.num_darts()).filter(|&d| deg[d] < 4).collect();
        if low.is_empty() {
            return Some(t);
        }
        let d = low[pick(low.len())];
        let d1 = m.face_next(d);
        let d2 = m.face_next(d1);
        if deg[d1] < 5 || deg[d2] < 5 {
            continue;
        }
        if let Ok((nt, _)) = pachner(&t, PachnerMove::Flip22(d1)) {
            t = nt;
        }
    }
    None
}

/// Moves cusps into regions with fewer than three.
fn repair(rot: Vec<usize>, mut lone: Vec<bool>, pick: Pick) -> Option<TrainTrack> {
    let n = rot.len();
    for _ in 0..20 * n {
        let t = TrainTrack::raw(rot.clone(), lone.clone(), Vec::new());
        let report = t.regions_and_indices();
        let poor: Vec<usize> = (0..report.regions.len()).filter(|&i| report.regions[i].cusps < 3).collect();
        if poor.is_empty() {
            return TrainTrack::new(rot, lone).ok();
        }
        let cyc = &report.regions[poor[pick(poor.len())]].cycles[0];
        let e = cyc[pick(cyc.len())];
        // make e the bottom dart of its switch
        let l = rot[e];
        for d in [e, l, rot[l]] {
            lone[d] = d == l;
        }
    }
    None
}

/// A positive rational measure: a random combination of a few vertices of
/// the switch-equation polytope.
pub fn measure(t: &TrainTrack, pick: Pick) -> Option<Measure> {
    let nb = t.num_branches();
    let int = |v: usize| BigRational::from_integer(BigInt::from(v));
    let mut total = vec![int(0); nb];
    for _ in 0..3 {
        let cost: Vec<BigRational> = (0..nb).map(|_| int(1 + pick(6))).collect();
        let v = positive_solution(t, Some(&cost))?;
        let k = int(1 + pick(4));
        for (s, x) in total.iter_mut().zip(v) {
            *s += &k * x;
        }
    }
    Some(Measure::rational(&total))
}

/// Clears denominators of a rational measure.
pub fn integral(mu: &Measure) -> Measure {
    let rs: Vec<BigRational> = mu.weights().iter().map(|w| w.as_rational().expect("rational measure")).collect();
    let mut l = BigInt::from(1);
    for r in &rs {
        l = num_integer::Integer::lcm(&l, r.denom());
    }
    Measure::rational(&rs.iter().map(|r| r * BigRational::from_integer(l.clone())).collect::<Vec<_>>())
}

pub fn measured_track(g: usize, splits: usize, pick: Pick) -> Option<(TrainTrack, Measure)> {
    let t = track(g, splits, pick)?;
    let mu = measure(&t, pick)?;
    Some((t, mu))
}

/// Positive measure `Σ v_k λ^k` over a field with positive generator `λ`;
/// each `v_k` is a positive solution moved in a random direction of the
/// solution space.
pub fn field_measure(t: &TrainTrack, field: &Arc<NumberField>, pick: Pick) -> Option<Measure> {
    let nb = t.num_branches();
    let base = positive_solution(t, None)?;
    let basis = super::lp::nullspace(&super::switch_matrix(t), nb);
    let mut coeffs = vec![Vec::new(); nb];
    for _ in 0..field.degree() {
        let mut dir = vec![BigRational::zero(); nb];
        for k in &basis {
            let r = BigRational::new(BigInt::from(pick(2001) as i64 - 1000), BigInt::from(1000));
            for (s, x) in dir.iter_mut().zip(k) {
                *s += &r * x;
            }
        }
        let mut scale = BigRational::one();
        let v = loop {
            let v: Vec<BigRational> = base.iter().zip(&dir).map(|(b, d)| &scale * b + d).collect();
            if v.iter().all(|x| x.is_positive()) {
                break v;
            }
            scale *= BigRational::from_integer(BigInt::from(2));
        };
        for (c, x) in coeffs.iter_mut().zip(v) {
            c.push(x);
        }
    }
    Measure::new(coeffs.into_iter().map(|c| NumberFieldElement::new(field, c)).collect()).ok()
}
