//! Slides and splits.
//!
//! Split picture, for a large branch `b` from the switch of `2b` (west) to
//! the switch of `2b+1` (east), with north up:
//!
//! ```text
//!   NW = top(2b)                    NE = bottom(2b+1)
//!        \                         /
//!         >======= branch b ======<
//!        /                         \
//!   SW = bottom(2b)                 SE = top(2b+1)
//! ```
//!
//! `Left` joins NW to SE through the new diagonal, `Right` joins SW to NE,
//! `Central` deletes `b` and joins NW to NE and SW to SE. With weights
//! `a, c` on NW and NE the measured split is `Left` if `a > c`, `Right` if
//! `a < c` and `Central` if equal.

use std::cmp::Ordering;
use std::fmt;

use super::{switch_failures, BranchClass, Measure, RegionGroup, Result, TrackError, TrainTrack};
use crate::numfield::{ArithOp, NumberFieldElement};
use crate::surf::{face_orbits, DartMap, NONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitChoice {
    Left,
    Right,
    Central,
}

impl fmt::Display for SplitChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitChoice::Left => "left",
            SplitChoice::Right => "right",
            SplitChoice::Central => "central",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitEvent {
    /// Branch label in the track before the maximal split.
    pub branch: usize,
    pub choice: SplitChoice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSplit {
    pub track: TrainTrack,
    pub measure: Measure,
    pub events: Vec<SplitEvent>,
    /// Old branch label to new label, `NONE` for deleted branches.
    pub branch_map: Vec<usize>,
}

struct Work {
    rot: Vec<usize>,
    lone: Vec<bool>,
    groups: Vec<RegionGroup>,
    weights: Option<Vec<NumberFieldElement>>,
}

impl Work {
    fn new(t: &TrainTrack, mu: Option<&Measure>) -> Result<Self> {
        if let Some(mu) = mu {
            if mu.len() != t.num_branches() {
                return Err(TrackError::InvalidMeasure(format!(
                    "{} weights for {} branches",
                    mu.len(),
                    t.num_branches()
                )));
            }
        }
        let (rot, lone) = t.parts();
        Ok(Work {
            rot: rot.to_vec(),
            lone: lone.to_vec(),
            groups: t.groups().to_vec(),
            weights: mu.map(|m| m.weights().to_vec()),
        })
    }

    fn track(&self) -> TrainTrack {
        TrainTrack::raw(self.rot.clone(), self.lone.clone(), self.groups.clone())
    }

    fn alive_branch(&self, b: usize) -> bool {
        2 * b + 1 < self.rot.len() && self.rot[2 * b] != NONE
    }

    fn set_switch(&mut self, l: usize, t: usize, b: usize) {
        self.rot[l] = t;
        self.rot[t] = b;
        self.rot[b] = l;
        self.lone[l] = true;
        self.lone[t] = false;
        self.lone[b] = false;
    }

    fn weight(&self, d: usize) -> Option<&NumberFieldElement> {
        self.weights.as_ref().map(|w| &w[d / 2])
    }

    fn set_weight(&mut self, b: usize, w: Option<NumberFieldElement>) {
        if let (Some(ws), Some(x)) = (self.weights.as_mut(), w) {
            ws[b] = x;
        }
    }

    fn class(&self, b: usize) -> Result<BranchClass> {
        if !self.alive_branch(b) {
            return Err(TrackError::UnknownBranch(b));
        }
        Ok(match (self.lone[2 * b], self.lone[2 * b + 1]) {
            (true, true) => BranchClass::Large,
            (false, false) => BranchClass::Small,
            _ => BranchClass::Mixed,
        })
    }

    fn slide(&mut self, b: usize) -> Result<()> {
        if self.class(b)? != BranchClass::Mixed {
            return Err(TrackError::NotMixed(b));
        }
        let before = self.track();
        let (xl, xs) = if self.lone[2 * b] { (2 * b, 2 * b + 1) } else { (2 * b + 1, 2 * b) };
        let (xf, xsec) = (self.rot[xl], self.rot[self.rot[xl]]);
        if xf == xs || xsec == xs {
            return Err(TrackError::Degenerate(format!("branch {b} is a loop at one switch")));
        }
        let (p, q) = (self.rot[xs], self.rot[self.rot[xs]]);
        let (l2, y) = if self.lone[p] { (p, q) } else { (q, p) };
        let add = |u: Option<&NumberFieldElement>, v: Option<&NumberFieldElement>| match (u, v) {
            (Some(u), Some(v)) => Some(u + v),
            _ => None,
        };
        if self.rot[l2] == y {
            let w = add(self.weight(xf), self.weight(y));
            self.set_switch(l2, xs, xsec);
            self.set_switch(xl, y, xf);
            self.set_weight(b, w);
        } else {
            let w = add(self.weight(y), self.weight(xsec));
            self.set_switch(l2, xf, xs);
            self.set_switch(xl, xsec, y);
            self.set_weight(b, w);
        }
        let touched = [xl, xs, xf, xsec, l2, y];
        self.groups = carry_regions(&before, &self.track(), &touched, None)?;
        Ok(())
    }

    /// Measured choice at a large branch.
    fn choice(&self, b: usize) -> Result<SplitChoice> {
        if self.class(b)? != BranchClass::Large {
            return Err(TrackError::NotLarge(b));
        }
        let (a, c) = (self.rot[2 * b], self.rot[self.rot[2 * b + 1]]);
        let (Some(a), Some(c)) = (self.weight(a), self.weight(c)) else {
            return Err(TrackError::InvalidMeasure("no measure".into()));
        };
        Ok(match a.cmp_value(c)? {
            Ordering::Greater => SplitChoice::Left,
            Ordering::Less => SplitChoice::Right,
            Ordering::Equal => SplitChoice::Central,
        })
    }

    fn split(&mut self, b: usize, choice: SplitChoice) -> Result<()> {
        if self.class(b)? != BranchClass::Large {
            return Err(TrackError::NotLarge(b));
        }
        let before = self.track();
        let (d0, d1) = (2 * b, 2 * b + 1);
        let (nw, sw) = (self.rot[d0], self.rot[self.rot[d0]]);
        let (se, ne) = (self.rot[d1], self.rot[self.rot[d1]]);
        let diff = |u: Option<&NumberFieldElement>, v: Option<&NumberFieldElement>| match (u, v) {
            (Some(u), Some(v)) => Some(u.arith(v, ArithOp::Sub)),
            _ => None,
        };
        match choice {
            SplitChoice::Left => {
                let w = diff(self.weight(nw), self.weight(ne)).transpose()?;
                self.set_switch(nw, d0, ne);
                self.set_switch(se, d1, sw);
                self.set_weight(b, w);
                self.groups = carry_regions(&before, &self.track(), &[d0, d1, nw, sw, se, ne], None)?;
            }
            SplitChoice::Right => {
                let w = diff(self.weight(ne), self.weight(nw)).transpose()?;
                self.set_switch(sw, se, d0);
                self.set_switch(ne, nw, d1);
                self.set_weight(b, w);
                self.groups = carry_regions(&before, &self.track(), &[d0, d1, nw, sw, se, ne], None)?;
            }
            SplitChoice::Central => {
                let pairs = [(nw, ne), (ne, nw), (sw, se), (se, sw)];
                let partner = |x: usize| pairs.iter().find(|p| p.0 == x).map(|p| p.1);
                let mut done: Vec<usize> = Vec::new();
                let mut joins = Vec::new();
                for p0 in [nw, sw] {
                    if done.contains(&p0) {
                        continue;
                    }
                    let trace = |start: usize, done: &mut Vec<usize>| -> Result<usize> {
                        let mut cur = start;
                        for _ in 0..5 {
                            done.push(cur);
                            let f = cur ^ 1;
                            match partner(f) {
                                Some(q) => {
                                    done.push(f);
                                    if done.contains(&q) {
                                        return Err(TrackError::Degenerate(format!(
                                            "central split at branch {b} leaves a closed curve"
                                        )));
                                    }
                                    cur = q;
                                }
                                None => return Ok(f),
                            }
                        }
                        Err(TrackError::Degenerate(format!("central split at branch {b} leaves a closed curve")))
                    };
                    let f1 = trace(p0, &mut done)?;
                    let f2 = trace(partner(p0).expect("paired"), &mut done)?;
                    joins.push((f1, f2));
                }
                for d in [d0, d1, nw, sw, se, ne] {
                    self.rot[d] = NONE;
                    self.lone[d] = false;
                }
                let mut fresh = Vec::new();
                for (f1, f2) in joins {
                    let g = f1 ^ 1;
                    let pr = self.rot[self.rot[f2]];
                    let next = self.rot[f2];
                    self.rot[pr] = g;
                    self.rot[g] = next;
                    self.lone[g] = self.lone[f2];
                    self.rot[f2] = NONE;
                    self.lone[f2] = false;
                    fresh.push(g);
                }
                let mut touched = vec![d0, d1, nw, sw, se, ne];
                touched.extend(fresh);
                self.groups = carry_regions(&before, &self.track(), &touched, Some((sw, ne)))?;
            }
        }
        Ok(())
    }

    /// Relabels branches densely in label order.
    fn compact(self) -> (TrainTrack, Option<Vec<NumberFieldElement>>, Vec<usize>) {
        let nb = self.rot.len() / 2;
        let mut map = vec![NONE; nb];
        let mut next = 0;
        for (b, slot) in map.iter_mut().enumerate() {
            if self.rot[2 * b] != NONE {
                *slot = next;
                next += 1;
            }
        }
        let perm = |d: usize| 2 * map[d / 2] + d % 2;
        let mut rot = vec![NONE; 2 * next];
        let mut lone = vec![false; 2 * next];
        for d in 0..self.rot.len() {
            if self.rot[d] != NONE {
                rot[perm(d)] = perm(self.rot[d]);
                lone[perm(d)] = self.lone[d];
            }
        }
        let groups = self
            .groups
            .iter()
            .map(|g| RegionGroup { darts: g.darts.iter().map(|&d| perm(d)).collect(), genus: g.genus })
            .collect();
        let weights = self.weights.map(|w| {
            w.into_iter().enumerate().filter(|(b, _)| map[*b] != NONE).map(|(_, x)| x).collect()
        });
        (TrainTrack::raw(rot, lone, groups), weights, map)
    }
}

/// Region groups after a move. Darts not in `touched` keep the region they
/// bounded; a central split glues the two cusp regions of the darts in
/// `band`.
fn carry_regions(
    before: &TrainTrack,
    after: &TrainTrack,
    touched: &[usize],
    band: Option<(usize, usize)>,
) -> Result<Vec<RegionGroup>> {
    let old = before.regions_and_indices();
    let mut region_of = vec![NONE; before.dart_bound()];
    for (i, r) in old.regions.iter().enumerate() {
        for &d in r.cycles.iter().flatten() {
            region_of[d] = i;
        }
    }
    let nr = old.regions.len();
    let mut parent: Vec<usize> = (0..nr).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    if let Some((d0, d1)) = band {
        let (x, y) = (find(&mut parent, region_of[d0]), find(&mut parent, region_of[d1]));
        parent[x.max(y)] = x.min(y);
    }
    let mut chi = vec![0i64; nr];
    for (i, r) in old.regions.iter().enumerate() {
        let root = find(&mut parent, i);
        chi[root] += r.euler;
    }
    if let Some((d0, _)) = band {
        let root = find(&mut parent, region_of[d0]);
        chi[root] -= 1;
    }
    let cycles = face_orbits(after);
    let mut cls_cycles: Vec<Vec<usize>> = vec![Vec::new(); nr];
    let mut total_chi = 0i64;
    for (ci, cyc) in cycles.iter().enumerate() {
        let mut cls = None;
        for &d in cyc {
            if touched.contains(&d) || region_of[d] == NONE {
                continue;
            }
            let r = find(&mut parent, region_of[d]);
            match cls {
                None => cls = Some(r),
                Some(c) if c != r => {
                    return Err(TrackError::Degenerate("boundary cycle meets two regions".into()));
                }
                _ => {}
            }
        }
        match cls {
            Some(c) => cls_cycles[c].push(ci),
            None => total_chi += 1,
        }
    }
    let mut groups = Vec::new();
    for r in 0..nr {
        if find(&mut parent, r) != r {
            continue;
        }
        let k = cls_cycles[r].len() as i64;
        if k == 0 {
            return Err(TrackError::Degenerate("a region lost its boundary".into()));
        }
        total_chi += chi[r];
        let h2 = 2 - k - chi[r];
        if h2 < 0 || h2 % 2 != 0 {
            return Err(TrackError::Degenerate(format!("region with {k} boundary cycles and euler {}", chi[r])));
        }
        if k > 1 || h2 > 0 {
            let darts = cls_cycles[r].iter().map(|&ci| cycles[ci][0]).collect();
            groups.push(RegionGroup { darts, genus: (h2 / 2) as usize });
        }
    }
    let v = |t: &TrainTrack| t.darts().len() as i64;
    let old_chi = v(before) / 3 - v(before) / 2 + old.regions.iter().map(|r| r.euler).sum::<i64>();
    if v(after) / 3 - v(after) / 2 + total_chi != old_chi {
        return Err(TrackError::Degenerate("move changed the surface".into()));
    }
    groups.sort_by_key(|g| g.darts[0]);
    Ok(groups)
}

pub fn slide(t: &TrainTrack, b: usize) -> Result<TrainTrack> {
    let mut w = Work::new(t, None)?;
    w.slide(b)?;
    Ok(w.compact().0)
}

/// Slide carrying a measure along.
pub fn measured_slide(t: &TrainTrack, mu: &Measure, b: usize) -> Result<(TrainTrack, Measure)> {
    let mut w = Work::new(t, Some(mu))?;
    w.slide(b)?;
    let (t, ws, _) = w.compact();
    Ok((t, Measure::new(ws.expect("measured"))?))
}

pub fn split(t: &TrainTrack, b: usize, choice: SplitChoice) -> Result<TrainTrack> {
    let mut w = Work::new(t, None)?;
    w.split(b, choice)?;
    Ok(w.compact().0)
}

/// The split direction forced by the measure at the large branch `b`.
pub fn split_choice(t: &TrainTrack, mu: &Measure, b: usize) -> Result<SplitChoice> {
    Work::new(t, Some(mu))?.choice(b)
}

pub fn measured_split(t: &TrainTrack, mu: &Measure, b: usize) -> Result<(TrainTrack, Measure)> {
    let mut w = Work::new(t, Some(mu))?;
    let choice = w.choice(b)?;
    w.split(b, choice)?;
    let (t, ws, _) = w.compact();
    Ok((t, Measure::new(ws.expect("measured"))?))
}

/// Checks positivity and switch conditions.
pub fn check_measure(t: &TrainTrack, mu: &Measure) -> Result<()> {
    if mu.len() != t.num_branches() {
        return Err(TrackError::InvalidMeasure(format!("{} weights for {} branches", mu.len(), t.num_branches())));
    }
    if let Some(b) = mu.weights().iter().position(|w| w.sign() <= 0) {
        return Err(TrackError::InvalidMeasure(format!("branch {b} has non-positive weight")));
    }
    if let Some(s) = switch_failures(t, mu)?.first() {
        return Err(TrackError::InvalidMeasure(format!("switch condition fails at switch {s}")));
    }
    Ok(())
}

/// Splits every branch of maximal weight, in increasing label order.
pub fn maximal_split(t: &TrainTrack, mu: &Measure) -> Result<MaximalSplit> {
    check_measure(t, mu)?;
    let ws = mu.weights();
    let mut max = &ws[0];
    for w in ws {
        if w.cmp_value(max)? == Ordering::Greater {
            max = w;
        }
    }
    let mut top = Vec::new();
    for (b, w) in ws.iter().enumerate() {
        if w.cmp_value(max)? == Ordering::Equal {
            top.push(b);
        }
    }
    let classes = t.classify_branches();
    if let Some(&b) = top.iter().find(|&&b| classes[b] != BranchClass::Large) {
        return Err(TrackError::InvalidMeasure(format!("maximal branch {b} is not large")));
    }
    let mut work = Work::new(t, Some(mu))?;
    let mut events = Vec::new();
    for &b in &top {
        let choice = work.choice(b)?;
        work.split(b, choice)?;
        events.push(SplitEvent { branch: b, choice });
    }
    let (track, weights, branch_map) = work.compact();
    Ok(MaximalSplit { track, measure: Measure::new(weights.expect("measured"))?, events, branch_map })
}
