//! Maximal splitting sequences, isomorphisms of train tracks, periodic
//! orbits and the Pachner paths they induce on dual triangulations.
//!
//! Sidecar format (`PeriodReport::sidecar`): one `key=value` per line, keys
//! `preperiod`, `period`, `lambda`, `lambda_approx`, `consistent`, `iso`
//! (space separated dart images), then `warning=` lines.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::numfield::{ArithOp, NumFieldError, NumberField, NumberFieldElement};
use crate::spinemoves::{pachner, Move, MoveError, MoveSeq, PachnerMove};
use crate::surf::{canonical_code, extend_iso, face_orbits, isomorphisms, DartMap, Triangulation2};
use crate::track::{
    check_measure, maximal_split, split, Measure, SplitChoice, SplitEvent, TrackError, TrainTrack,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("InvalidMeasure: {0}")]
    InvalidMeasure(String),
    #[error("Exhausted: no period among {0} steps")]
    Exhausted(usize),
    #[error("FieldRequired: measures lie in different fields")]
    FieldRequired,
    #[error("CentralSplitPresent: step {0}")]
    CentralSplitPresent(usize),
    #[error("EndpointMismatch: {0}")]
    EndpointMismatch(String),
    #[error("BadSegment: {0}")]
    BadSegment(String),
    #[error("{0}")]
    Track(#[from] TrackError),
    #[error("{0}")]
    NumField(#[from] NumFieldError),
    #[error("{0}")]
    Move(#[from] MoveError),
}

pub type Result<T> = std::result::Result<T, OrbitError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub track: TrainTrack,
    pub measure: Measure,
    /// Splits that produced this step from the previous one; empty for the
    /// first step.
    pub events: Vec<SplitEvent>,
}

impl Step {
    pub fn has_central(&self) -> bool {
        self.events.iter().any(|e| e.choice == SplitChoice::Central)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSequence {
    pub steps: Vec<Step>,
    /// Why generation stopped before the limit, if it did.
    pub halted: Option<String>,
}

impl SplitSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends up to `more` maximal splits of the last step.
    pub fn extend(&mut self, more: usize) {
        for _ in 0..more {
            let last = self.steps.last().expect("nonempty sequence");
            match maximal_split(&last.track, &last.measure) {
                Ok(m) => self.steps.push(Step { track: m.track, measure: m.measure, events: m.events }),
                Err(e) => {
                    self.halted = Some(format!("step {}: {e}", self.steps.len()));
                    return;
                }
            }
        }
    }

    /// Steps that are not the maximal split of their predecessor.
    pub fn replay_failures(&self) -> Vec<usize> {
        (1..self.steps.len())
            .filter(|&i| {
                let p = &self.steps[i - 1];
                match maximal_split(&p.track, &p.measure) {
                    Ok(m) => m.track != self.steps[i].track || m.measure != self.steps[i].measure,
                    Err(_) => true,
                }
            })
            .collect()
    }
}

/// At most `limit` maximal splits starting from `(t, mu)`.
pub fn splitting_sequence(t: &TrainTrack, mu: &Measure, limit: usize) -> Result<SplitSequence> {
    check_measure(t, mu).map_err(|e| match e {
        TrackError::InvalidMeasure(s) => OrbitError::InvalidMeasure(s),
        other => OrbitError::InvalidMeasure(other.to_string()),
    })?;
    let mut seq = SplitSequence {
        steps: vec![Step { track: t.clone(), measure: mu.clone(), events: Vec::new() }],
        halted: None,
    };
    seq.extend(limit);
    Ok(seq)
}

/// Every dart bijection `a → b` preserving opposites, rotation, smoothing
/// and region groups, ordered by the image of `a`'s first dart.
pub fn find_isomorphisms(a: &TrainTrack, b: &TrainTrack) -> Vec<Vec<usize>> {
    if a.num_darts() != b.num_darts() || a.groups().len() != b.groups().len() {
        return Vec::new();
    }
    let mut isos = isomorphisms(a, b);
    if !a.groups().is_empty() {
        let fb = face_index(b);
        let targets: Vec<(Vec<usize>, usize)> =
            b.groups().iter().map(|g| (sorted(g.darts.iter().map(|&d| fb[d])), g.genus)).collect();
        isos.retain(|f| {
            a.groups().iter().all(|g| targets.contains(&(sorted(g.darts.iter().map(|&d| fb[f[d]])), g.genus)))
        });
    }
    isos
}

fn face_index(t: &TrainTrack) -> Vec<usize> {
    let mut idx = vec![0; t.num_darts()];
    for (i, f) in face_orbits(t).iter().enumerate() {
        for &d in f {
            idx[d] = i;
        }
    }
    idx
}

fn sorted(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodReport {
    pub preperiod: usize,
    pub period: usize,
    /// Dart bijection from step `preperiod + period` to step `preperiod`.
    pub iso: Vec<usize>,
    pub lambda: NumberFieldElement,
    pub consistent: bool,
    pub warnings: Vec<String>,
}

impl PeriodReport {
    /// Branch part of `iso`.
    pub fn branch_map(&self) -> Vec<usize> {
        (0..self.iso.len() / 2).map(|b| self.iso[2 * b] / 2).collect()
    }

    pub fn sidecar(&self) -> String {
        let mut s = String::from("format: 1\n");
        s.push_str(&format!("preperiod={}\nperiod={}\n", self.preperiod, self.period));
        s.push_str(&format!("lambda={}\nlambda_approx={:.12}\n", self.lambda, self.lambda.to_f64()));
        s.push_str(&format!("consistent={}\n", self.consistent));
        let iso: Vec<String> = self.iso.iter().map(|d| d.to_string()).collect();
        s.push_str(&format!("iso={}\n", iso.join(" ")));
        for w in &self.warnings {
            s.push_str(&format!("warning={w}\n"));
        }
        s
    }
}

/// Weights of every step in one common field.
fn common_weights(seq: &SplitSequence, field: Option<&Arc<NumberField>>) -> Result<Vec<Vec<NumberFieldElement>>> {
    let all = seq.steps.iter().flat_map(|s| s.measure.weights());
    let target: Arc<NumberField> = match field {
        Some(f) => f.clone(),
        None => {
            let mut irr: Option<&NumberFieldElement> = None;
            for w in all {
                if w.field().degree() > 1 {
                    match irr {
                        None => irr = Some(w),
                        Some(x) if !x.same_field(w) => return Err(OrbitError::FieldRequired),
                        _ => {}
                    }
                }
            }
            match irr {
                Some(x) => x.field().clone(),
                None => match seq.steps[0].measure.field() {
                    Some(f) => f.clone(),
                    None => NumberField::rationals(),
                },
            }
        }
    };
    let probe = NumberFieldElement::zero(&target);
    let conv = |w: &NumberFieldElement| -> Result<NumberFieldElement> {
        if w.same_field(&probe) {
            return Ok(w.clone());
        }
        match w.as_rational() {
            Some(r) if w.field().degree() == 1 => Ok(NumberFieldElement::from_rational(&target, r)),
            _ if field.is_some() => Err(NumFieldError::FieldMismatch.into()),
            _ => Err(OrbitError::FieldRequired),
        }
    };
    seq.steps.iter().map(|s| s.measure.weights().iter().map(conv).collect()).collect()
}

/// λ with `mu_i(b)·λ = mu_j(beta(b))` for all `b`, if it exists.
fn projective_ratio(
    mu_i: &[NumberFieldElement],
    mu_j: &[NumberFieldElement],
    beta: &[usize],
) -> Result<Option<NumberFieldElement>> {
    let (i0, j0) = (&mu_i[0], &mu_j[beta[0]]);
    for b in 1..mu_i.len() {
        let lhs = mu_i[b].arith(j0, ArithOp::Mul)?;
        let rhs = mu_j[beta[b]].arith(i0, ArithOp::Mul)?;
        if !lhs.arith(&rhs, ArithOp::Sub)?.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(j0.arith(i0, ArithOp::Div)?))
}

/// First `(j, i)`, `j < i`, with `τ_i ≅ τ_j` carrying `μ_i` to a multiple of
/// `μ_j`.
pub fn detect_period(seq: &SplitSequence, field: Option<&Arc<NumberField>>) -> Result<PeriodReport> {
    if seq.is_empty() {
        return Err(OrbitError::BadSegment("empty sequence".into()));
    }
    let ws = common_weights(seq, field)?;
    let mut seen: HashMap<Vec<(usize, usize, u64)>, Vec<usize>> = HashMap::new();
    for (i, step) in seq.steps.iter().enumerate() {
        let code = canonical_code(&step.track);
        let earlier = seen.entry(code).or_default();
        for &j in earlier.iter() {
            for iso in find_isomorphisms(&step.track, &seq.steps[j].track) {
                let beta: Vec<usize> = (0..step.track.num_branches()).map(|b| iso[2 * b] / 2).collect();
                if let Some(lambda) = projective_ratio(&ws[i], &ws[j], &beta)? {
                    let mut warnings = Vec::new();
                    if lambda == NumberFieldElement::one(lambda.field()) {
                        warnings.push("lambda = 1: not pseudo-Anosov (dilatation must exceed 1)".to_string());
                    }
                    let consistent = (0..beta.len()).all(|b| {
                        ws[i][b].arith(&lambda, ArithOp::Mul).is_ok_and(|x| x == ws[j][beta[b]])
                    });
                    return Ok(PeriodReport { preperiod: j, period: i - j, iso, lambda, consistent, warnings });
                }
            }
        }
        earlier.push(i);
    }
    Err(OrbitError::Exhausted(seq.len()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthBounds {
    pub genus: usize,
    pub period: usize,
    /// `(18g − 18)·m`.
    pub upper: usize,
}

pub fn length_bounds(report: &PeriodReport, g: usize) -> LengthBounds {
    LengthBounds { genus: g, period: report.period, upper: (18 * g).saturating_sub(18) * report.period }
}

impl fmt::Display for LengthBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "genus: {}", self.genus)?;
        writeln!(f, "period: {}", self.period)?;
        writeln!(f, "translation length <= (18g-18)m = {}", self.upper)?;
        writeln!(f, "stable translation length >= m/Q (Q non-constructive)")
    }
}

/// Full plain-text period report.
pub fn render_period(seq: &SplitSequence, report: &PeriodReport, g: usize) -> String {
    let mut s = String::from("format: 1\n");
    s.push_str(&format!("steps: {}\n", seq.len()));
    s.push_str(&format!("PREPERIOD\nn: {}\n", report.preperiod));
    s.push_str(&format!("PERIOD\nm: {}\n", report.period));
    let bm: Vec<String> = report.branch_map().iter().enumerate().map(|(b, c)| format!("{b}->{c}")).collect();
    s.push_str(&format!("branch_map: {}\n", bm.join(" ")));
    s.push_str(&format!("LAMBDA\nlambda: {}\n", report.lambda));
    s.push_str(&format!("approx: {:.12}\n", report.lambda.to_f64()));
    s.push_str(&format!("consistent: {}\n", report.consistent));
    s.push_str("BOUNDS\n");
    s.push_str(&length_bounds(report, g).to_string());
    for w in &report.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PachnerPath {
    pub start: Triangulation2,
    pub moves: MoveSeq,
    pub end: Triangulation2,
    /// Number of moves contributed by each maximal split.
    pub per_step: Vec<usize>,
    /// Dart of the last track to dart of `end`.
    pub track_to_end: Vec<usize>,
}

/// One 2-2 move per split between steps `from` and `to`, starting on the
/// dual triangulation of step `from`.
pub fn pachner_path(seq: &SplitSequence, from: usize, to: usize) -> Result<PachnerPath> {
    if from > to || to >= seq.len() {
        return Err(OrbitError::BadSegment(format!("{from}..{to} in {} steps", seq.len())));
    }
    if let Some(k) = (from + 1..=to).find(|&k| seq.steps[k].has_central()) {
        return Err(OrbitError::CentralSplitPresent(k));
    }
    let start = seq.steps[from].track.dual_triangulation()?;
    let mut tri = start.clone();
    // track dart → triangulation dart
    let mut phi: Vec<usize> = (0..tri.surface().num_darts()).collect();
    let mut moves = MoveSeq::new();
    let mut per_step = Vec::new();
    for k in from + 1..=to {
        let mut cur = seq.steps[k - 1].track.clone();
        for ev in &seq.steps[k].events {
            let b = ev.branch;
            let next = split(&cur, b, ev.choice)?;
            let mv = PachnerMove::Flip22(phi[2 * b]);
            let (nt, _) = pachner(&tri, mv)?;
            let dual = next.to_surface().dual();
            let anchor = (0..cur.num_darts()).find(|&d| d / 2 != b && untouched(&cur, b, d));
            let found = anchor.and_then(|d| extend_iso(&dual, nt.surface(), d, phi[d]));
            phi = match found {
                Some(f) => f,
                None => isomorphisms(&dual, nt.surface())
                    .into_iter()
                    .next()
                    .ok_or_else(|| OrbitError::EndpointMismatch(format!("step {k}: flip is not dual to split")))?,
            };
            moves.moves.push(Move::Pachner(mv));
            tri = nt;
            cur = next;
        }
        per_step.push(seq.steps[k].events.len());
        let target = &seq.steps[k].track;
        if &cur != target {
            let f = find_isomorphisms(target, &cur)
                .into_iter()
                .next()
                .ok_or_else(|| OrbitError::EndpointMismatch(format!("step {k} is not a split of step {}", k - 1)))?;
            phi = f.iter().map(|&d| phi[d]).collect();
        }
    }
    let end_dual = seq.steps[to].track.dual_triangulation()?;
    if !tri.same_up_to_relabeling(&end_dual) {
        return Err(OrbitError::EndpointMismatch("final triangulation".into()));
    }
    Ok(PachnerPath { start, moves, end: tri, per_step, track_to_end: phi })
}

/// Flip path over one period and the monodromy from its end darts to its
/// start darts. Needs step `n + m` to be a genuine split of step `n + m - 1`.
pub fn period_monodromy(seq: &SplitSequence, report: &PeriodReport) -> Result<(PachnerPath, Vec<usize>)> {
    let (n, m) = (report.preperiod, report.period);
    let path = pachner_path(seq, n, n + m)?;
    let mut inv = vec![0; path.track_to_end.len()];
    for (d, &y) in path.track_to_end.iter().enumerate() {
        inv[y] = d;
    }
    let phi = inv.iter().map(|&d| report.iso[d]).collect();
    Ok((path, phi))
}

/// `d` lies away from both switches of branch `b`.
fn untouched(t: &TrainTrack, b: usize, d: usize) -> bool {
    let sw = t.switch_of();
    let ends = [sw[2 * b], sw[2 * b + 1]];
    !ends.contains(&sw[d]) && !ends.contains(&sw[t.opp(d)])
}

/// Sequence with a planted period: the maximal splits of `(t, mu)` up to
/// step `n + m − 1`, then step `n` relabelled by `perm` with weights divided
/// by `lambda`, then `tail` further maximal splits. `perm` maps darts of step
/// `n` to darts of the planted step and must send branch pairs to branch
/// pairs. Step `n + m` is the only one that fails replay.
pub fn plant(
    t: &TrainTrack,
    mu: &Measure,
    n: usize,
    m: usize,
    perm: &[usize],
    lambda: &NumberFieldElement,
    tail: usize,
) -> Result<SplitSequence> {
    if m == 0 {
        return Err(OrbitError::BadSegment("period 0".into()));
    }
    let mut seq = splitting_sequence(t, mu, n + m - 1)?;
    if seq.len() < n + m {
        return Err(OrbitError::BadSegment(seq.halted.clone().unwrap_or_default()));
    }
    let base = &seq.steps[n];
    let track = base.track.relabel(perm);
    let mut w = base.measure.weights().to_vec();
    for b in 0..w.len() {
        w[perm[2 * b] / 2] = base.measure.weight(b).arith(lambda, ArithOp::Div)?;
    }
    seq.steps.push(Step { track, measure: Measure::new(w)?, events: Vec::new() });
    seq.extend(tail);
    Ok(seq)
}

/// Render a sequence summary: one line per step.
pub fn render_sequence(seq: &SplitSequence) -> String {
    let mut s = String::from("format: 1\n");
    s.push_str(&format!("steps: {}\n", seq.len()));
    for (i, st) in seq.steps.iter().enumerate() {
        let ev: Vec<String> = st.events.iter().map(|e| format!("{}{}", e.choice, e.branch)).collect();
        s.push_str(&format!("step {i}: branches={} splits=[{}]\n", st.track.num_branches(), ev.join(",")));
    }
    if let Some(h) = &seq.halted {
        s.push_str(&format!("halted: {h}\n"));
    }
    s
}

#[cfg(test)]
mod tests;
