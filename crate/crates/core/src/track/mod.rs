//! Measured train tracks on closed surfaces.
//!
//! Branch `b` owns darts `2b` and `2b+1`. A switch is a rotation orbit of
//! three darts `(lone, top, bottom)` with `top = rot(lone)` and
//! `bottom = rot(top)`: the small side is read counterclockwise from the lone
//! half-branch. Regions are the face orbits of `d ↦ rot(d ^ 1)` unless some of
//! them are grouped into a non-disc region.

mod lp;
mod moves;
pub mod random;
#[cfg(test)]
mod tests;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numfield::{parse_element, ArithOp, parse_rational, NumFieldError, NumberField, NumberFieldElement};
use crate::surf::{components, face_orbits, vertex_orbits, CombSurface, DartMap, SurfError, Triangulation2, NONE};

pub use moves::{
    check_measure, maximal_split, measured_slide, measured_split, slide, split, split_choice, MaximalSplit,
    SplitChoice, SplitEvent,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrackError {
    #[error("NotTrivalent: {0}")]
    NotTrivalent(String),
    #[error("BadSmoothing: {0}")]
    BadSmoothing(String),
    #[error("Disconnected: track has several components")]
    Disconnected,
    #[error("NotMixed: branch {0} is not mixed")]
    NotMixed(usize),
    #[error("NotLarge: branch {0} is not large")]
    NotLarge(usize),
    #[error("UnknownBranch: {0}")]
    UnknownBranch(usize),
    #[error("NotFilling: {0}")]
    NotFilling(String),
    #[error("InvalidMeasure: {0}")]
    InvalidMeasure(String),
    #[error("Degenerate: {0}")]
    Degenerate(String),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("{0}")]
    NumField(#[from] NumFieldError),
    #[error("{0}")]
    Surf(#[from] SurfError),
}

pub type Result<T> = std::result::Result<T, TrackError>;

/// Several face cycles bounding one region of genus `genus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegionGroup {
    /// One dart on each boundary cycle.
    pub darts: Vec<usize>,
    pub genus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrainTrack {
    rot: Vec<usize>,
    lone: Vec<bool>,
    groups: Vec<RegionGroup>,
}

impl DartMap for TrainTrack {
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
        self.lone[d] as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchClass {
    Large,
    Small,
    Mixed,
}

impl fmt::Display for BranchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchClass::Large => "large",
            BranchClass::Small => "small",
            BranchClass::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub cycles: Vec<Vec<usize>>,
    pub cusps: usize,
    pub euler: i64,
    pub index: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionReport {
    pub regions: Vec<Region>,
    pub filling: bool,
}

impl RegionReport {
    pub fn total_index(&self) -> Rational64 {
        self.regions.iter().map(|r| r.index).sum()
    }
}

impl TrainTrack {
    /// Builds a track from `(lone, top, bottom)` rows. Darts must be exactly
    /// `0..2B` for some `B`, each used once.
    pub fn from_switches(rows: &[[usize; 3]]) -> Result<Self> {
        let n = rows.len() * 3;
        if !n.is_multiple_of(2) {
            return Err(TrackError::NotTrivalent(format!("{} half-branches is odd", n)));
        }
        let mut rot = vec![NONE; n];
        let mut lone = vec![false; n];
        for (s, row) in rows.iter().enumerate() {
            for &d in row {
                if d >= n {
                    return Err(TrackError::NotTrivalent(format!("switch {s}: dart {d} out of range 0..{n}")));
                }
                if rot[d] != NONE {
                    return Err(TrackError::BadSmoothing(format!("dart {d} appears twice")));
                }
            }
            if row[0] == row[1] || row[1] == row[2] || row[0] == row[2] {
                return Err(TrackError::BadSmoothing(format!("switch {s} repeats a dart")));
            }
            rot[row[0]] = row[1];
            rot[row[1]] = row[2];
            rot[row[2]] = row[0];
            lone[row[0]] = true;
        }
        Self::new(rot, lone)
    }

    /// Builds a track from a trivalent rotation and lone flags.
    pub fn new(rot: Vec<usize>, lone: Vec<bool>) -> Result<Self> {
        let n = rot.len();
        if n == 0 || !n.is_multiple_of(2) || lone.len() != n {
            return Err(TrackError::NotTrivalent(format!("{n} darts")));
        }
        let mut seen = vec![false; n];
        for &r in &rot {
            if r >= n || seen[r] {
                return Err(TrackError::NotTrivalent("rotation is not a permutation".into()));
            }
            seen[r] = true;
        }
        let t = TrainTrack { rot, lone, groups: Vec::new() };
        for (s, v) in vertex_orbits(&t).iter().enumerate() {
            if v.len() != 3 {
                return Err(TrackError::NotTrivalent(format!("switch {s} has valence {}", v.len())));
            }
            let k = v.iter().filter(|&&d| t.lone[d]).count();
            if k != 1 {
                return Err(TrackError::BadSmoothing(format!("switch {s} has {k} lone half-branches")));
            }
        }
        if components(&t) != 1 {
            return Err(TrackError::Disconnected);
        }
        Ok(t)
    }

    /// Declares non-disc regions. Each group lists one dart per boundary
    /// cycle; cycles not mentioned stay discs.
    pub fn with_groups(mut self, groups: Vec<RegionGroup>) -> Result<Self> {
        let faces = face_orbits(&self);
        let mut used = BTreeSet::new();
        for g in &groups {
            if g.darts.is_empty() {
                return Err(TrackError::Parse("empty region group".into()));
            }
            for &d in &g.darts {
                let f = faces
                    .iter()
                    .position(|c| c.contains(&d))
                    .ok_or_else(|| TrackError::Parse(format!("region dart {d} unknown")))?;
                if !used.insert(f) {
                    return Err(TrackError::Parse(format!("boundary cycle of dart {d} listed twice")));
                }
            }
        }
        self.groups = groups;
        Ok(self)
    }

    pub fn groups(&self) -> &[RegionGroup] {
        &self.groups
    }

    pub fn num_darts(&self) -> usize {
        self.rot.len()
    }

    pub fn num_branches(&self) -> usize {
        self.rot.len() / 2
    }

    pub fn num_switches(&self) -> usize {
        self.rot.len() / 3
    }

    pub fn is_lone(&self, d: usize) -> bool {
        self.lone[d]
    }

    /// Switches as `[lone, top, bottom]`, ordered by least dart.
    pub fn switches(&self) -> Vec<[usize; 3]> {
        vertex_orbits(self)
            .into_iter()
            .map(|v| {
                let l = *v.iter().find(|&&d| self.lone[d]).expect("one lone dart");
                [l, self.rot[l], self.rot[self.rot[l]]]
            })
            .collect()
    }

    /// Switch index of every dart.
    pub fn switch_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.rot.len()];
        for (i, v) in vertex_orbits(self).iter().enumerate() {
            for &d in v {
                out[d] = i;
            }
        }
        out
    }

    /// The small dart at a cusp of the region containing it.
    pub fn is_bottom(&self, d: usize) -> bool {
        !self.lone[d] && self.lone[self.rot[d]]
    }

    pub fn classify_branches(&self) -> Vec<BranchClass> {
        (0..self.num_branches())
            .map(|b| match (self.lone[2 * b], self.lone[2 * b + 1]) {
                (true, true) => BranchClass::Large,
                (false, false) => BranchClass::Small,
                _ => BranchClass::Mixed,
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let r = self.regions_and_indices();
        self.num_switches() as i64 - self.num_branches() as i64 + r.regions.iter().map(|x| x.euler).sum::<i64>()
    }

    /// Genus of the carrier surface, derived from the Euler characteristic.
    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// Complementary regions: boundary cycles, cusps (one at every bottom
    /// dart), Euler characteristic and index χ − cusps/2.
    pub fn regions_and_indices(&self) -> RegionReport {
        let faces = face_orbits(self);
        let mut taken = vec![false; faces.len()];
        let mut regions = Vec::new();
        let face_index = |d: usize| faces.iter().position(|c| c.contains(&d)).expect("alive dart");
        let push = |cyc_ids: Vec<usize>, genus: usize, regions: &mut Vec<Region>| {
            let cycles: Vec<Vec<usize>> = cyc_ids.iter().map(|&i| faces[i].clone()).collect();
            let cusps = cycles.iter().flatten().filter(|&&d| self.is_bottom(d)).count();
            let euler = 2 - 2 * genus as i64 - cycles.len() as i64;
            let index = Rational64::from_integer(euler) - Rational64::new(cusps as i64, 2);
            regions.push(Region { cycles, cusps, euler, index });
        };
        for g in &self.groups {
            let ids: Vec<usize> = g.darts.iter().map(|&d| face_index(d)).collect();
            for &i in &ids {
                taken[i] = true;
            }
            push(ids, g.genus, &mut regions);
        }
        for i in 0..faces.len() {
            if !taken[i] {
                push(vec![i], 0, &mut regions);
            }
        }
        regions.sort_by_key(|r| r.cycles[0][0]);
        RegionReport { regions, filling: self.groups.is_empty() }
    }

    /// The track graph as a surface map (faces = complementary regions).
    pub fn to_surface(&self) -> CombSurface {
        let opp = (0..self.rot.len()).map(|d| d ^ 1).collect();
        CombSurface::new(opp, self.rot.clone()).expect("track rotation is a valid map")
    }

    /// The triangulation dual to a filling track: darts keep their ids,
    /// switches become triangles and regions become vertices.
    pub fn dual_triangulation(&self) -> Result<Triangulation2> {
        if !self.groups.is_empty() {
            return Err(TrackError::NotFilling(format!("{} non-disc regions", self.groups.len())));
        }
        Ok(Triangulation2::new(self.to_surface().dual())?)
    }

    /// Relabels darts by `perm` (old → new), which must send `2b, 2b+1` to a
    /// branch pair.
    pub fn relabel(&self, perm: &[usize]) -> TrainTrack {
        let n = self.rot.len();
        let mut rot = vec![NONE; n];
        let mut lone = vec![false; n];
        for d in 0..n {
            rot[perm[d]] = perm[self.rot[d]];
            lone[perm[d]] = self.lone[d];
        }
        let groups = self
            .groups
            .iter()
            .map(|g| RegionGroup { darts: g.darts.iter().map(|&d| perm[d]).collect(), genus: g.genus })
            .collect();
        TrainTrack { rot, lone, groups }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, [l, t, b]) in self.switches().iter().enumerate() {
            out.push_str(&format!("switch {s}: lone={l} top={t} bottom={b}\n"));
        }
        for g in &self.groups {
            let ds: Vec<String> = g.darts.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("region: darts={} genus={}\n", ds.join(","), g.genus));
        }
        out
    }

    pub(crate) fn raw(rot: Vec<usize>, lone: Vec<bool>, groups: Vec<RegionGroup>) -> Self {
        TrainTrack { rot, lone, groups }
    }

    pub(crate) fn parts(&self) -> (&[usize], &[bool]) {
        (&self.rot, &self.lone)
    }
}

/// One positive weight per branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<NumberFieldElement>,
}

impl Measure {
    pub fn new(weights: Vec<NumberFieldElement>) -> Result<Self> {
        if let Some(w) = weights.first() {
            if weights.iter().any(|x| !x.same_field(w)) {
                return Err(TrackError::NumField(NumFieldError::FieldMismatch));
            }
        }
        Ok(Measure { weights })
    }

    pub fn rational(weights: &[BigRational]) -> Self {
        let q = NumberField::rationals();
        Measure { weights: weights.iter().map(|w| NumberFieldElement::from_rational(&q, w.clone())).collect() }
    }

    pub fn from_ints(weights: &[i64]) -> Self {
        Self::rational(&weights.iter().map(|&w| BigRational::from_integer(BigInt::from(w))).collect::<Vec<_>>())
    }

    pub fn weights(&self) -> &[NumberFieldElement] {
        &self.weights
    }

    pub fn weight(&self, b: usize) -> &NumberFieldElement {
        &self.weights[b]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.weights.first().map(|w| w.field())
    }
}

/// A single problem found by [`validate_track`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    NonNegativeIndex { region: usize, index: Rational64 },
    MeasureLength { expected: usize, found: usize },
    PositivityFailure { branch: usize },
    SwitchConditionFailure { switch: usize },
    NotRecurrent,
    FieldMismatch,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::NonNegativeIndex { region, index } => {
                write!(f, "NegativeIndexFailure: region {region} has index {index}")
            }
            Issue::MeasureLength { expected, found } => {
                write!(f, "MeasureLength: expected {expected} weights, found {found}")
            }
            Issue::PositivityFailure { branch } => write!(f, "PositivityFailure: branch {branch}"),
            Issue::SwitchConditionFailure { switch } => write!(f, "SwitchConditionFailure: switch {switch}"),
            Issue::NotRecurrent => write!(f, "NotRecurrent: switch equations have no positive solution"),
            Issue::FieldMismatch => write!(f, "FieldMismatch: weights lie in different fields"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackReport {
    pub switches: usize,
    pub branches: usize,
    pub genus: i64,
    pub regions: RegionReport,
    pub recurrent: bool,
    pub issues: Vec<Issue>,
    pub warnings: Vec<String>,
}

impl TrackReport {
    pub fn is_train_track(&self) -> bool {
        !self.issues.iter().any(|i| matches!(i, Issue::NonNegativeIndex { .. }))
    }

    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for TrackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "switches: {}", self.switches)?;
        writeln!(f, "branches: {}", self.branches)?;
        writeln!(f, "genus: {}", self.genus)?;
        writeln!(f, "trivalent: ok")?;
        writeln!(f, "smoothing: ok")?;
        writeln!(f, "regions: {}", self.regions.regions.len())?;
        for (i, r) in self.regions.regions.iter().enumerate() {
            writeln!(
                f,
                "region {i}: cycles={} cusps={} euler={} index={}",
                r.cycles.len(),
                r.cusps,
                r.euler,
                r.index
            )?;
        }
        writeln!(f, "filling: {}", self.regions.filling)?;
        writeln!(f, "train_track: {}", self.is_train_track())?;
        writeln!(f, "recurrent: {}", self.recurrent)?;
        for i in &self.issues {
            writeln!(f, "issue: {i}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        write!(f, "status: {}", if self.ok() { "ok" } else { "failed" })
    }
}

/// Exact check of `lone = top + bottom` at every switch.
pub fn switch_failures(t: &TrainTrack, mu: &Measure) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (s, [l, a, b]) in t.switches().iter().enumerate() {
        let sum = mu.weight(a / 2).arith(mu.weight(b / 2), ArithOp::Add)?;
        if *mu.weight(l / 2) != sum {
            out.push(s);
        }
    }
    Ok(out)
}

/// Whether the switch equations have a strictly positive rational solution.
pub fn is_recurrent(t: &TrainTrack) -> bool {
    positive_solution(t, None).is_some()
}

/// One row per switch: lone weight minus the two others.
pub(crate) fn switch_matrix(t: &TrainTrack) -> Vec<Vec<BigRational>> {
    let nb = t.num_branches();
    t.switches()
        .into_iter()
        .map(|[l, x, y]| {
            let mut row = vec![BigRational::zero(); nb];
            row[l / 2] += BigRational::one();
            row[x / 2] -= BigRational::one();
            row[y / 2] -= BigRational::one();
            row
        })
        .collect()
}

/// A strictly positive solution of the switch equations (all weights ≥ 1),
/// minimising `cost` if given.
pub(crate) fn positive_solution(t: &TrainTrack, cost: Option<&[BigRational]>) -> Option<Vec<BigRational>> {
    positive_solution_with(t, cost, &[])
}

/// As [`positive_solution`], with some weights pinned to given values ≥ 1.
pub fn positive_solution_with(
    t: &TrainTrack,
    cost: Option<&[BigRational]>,
    fixed: &[(usize, BigRational)],
) -> Option<Vec<BigRational>> {
    let nb = t.num_branches();
    let mut a = switch_matrix(t);
    let mut rhs: Vec<BigRational> = a.iter().map(|row| -row.iter().sum::<BigRational>()).collect();
    for (b, v) in fixed {
        let mut row = vec![BigRational::zero(); nb];
        row[*b] = BigRational::one();
        rhs.push(v - BigRational::one());
        a.push(row);
    }
    let zero = vec![BigRational::zero(); nb];
    let v = lp::minimize(&a, &rhs, cost.unwrap_or(&zero))?;
    Some(v.into_iter().map(|x| x + BigRational::one()).collect())
}

/// Full diagnostic of a track and optional measure. Never fails.
pub fn validate_track(t: &TrainTrack, mu: Option<&Measure>) -> TrackReport {
    let regions = t.regions_and_indices();
    let mut issues = Vec::new();
    for (i, r) in regions.regions.iter().enumerate() {
        if r.index >= Rational64::zero() {
            issues.push(Issue::NonNegativeIndex { region: i, index: r.index });
        }
    }
    if let Some(mu) = mu {
        if mu.len() != t.num_branches() {
            issues.push(Issue::MeasureLength { expected: t.num_branches(), found: mu.len() });
        } else {
            for (b, w) in mu.weights().iter().enumerate() {
                if w.sign() <= 0 {
                    issues.push(Issue::PositivityFailure { branch: b });
                }
            }
            match switch_failures(t, mu) {
                Ok(fails) => issues.extend(fails.into_iter().map(|s| Issue::SwitchConditionFailure { switch: s })),
                Err(_) => issues.push(Issue::FieldMismatch),
            }
        }
    }
    let recurrent = is_recurrent(t);
    if !recurrent {
        issues.push(Issue::NotRecurrent);
    }
    let warnings = vec!["birecurrence not certified (transverse recurrence is not checked)".to_string()];
    let genus = t.genus();
    TrackReport {
        switches: t.num_switches(),
        branches: t.num_branches(),
        genus,
        regions,
        recurrent,
        issues,
        warnings,
    }
}

/// Writes a track and optional measure in the track file format.
pub fn write_track(t: &TrainTrack, mu: Option<&Measure>) -> String {
    let mut out = String::from("format: 1\n");
    out.push_str(&t.to_text());
    if let Some(mu) = mu {
        for (b, w) in mu.weights().iter().enumerate() {
            out.push_str(&format!("branch {b}: weight={}\n", format_weight(w)));
        }
    }
    out
}

/// Rational weights print as `p/q`; others in the element format.
pub fn format_weight(w: &NumberFieldElement) -> String {
    if w.field().degree() <= 1 {
        if let Some(r) = w.as_rational() {
            return if r.is_integer() { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) };
        }
    }
    w.to_string()
}

fn parse_err(line: usize, msg: impl fmt::Display) -> TrackError {
    TrackError::Parse(format!("line {}: {msg}", line + 1))
}

fn key_value<'a>(line: usize, item: &'a str, key: &str) -> Result<&'a str> {
    item.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected {key}=, found '{item}'")))
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| parse_err(line, format!("bad integer '{s}'")))
}

/// Parses a track file: `switch` rows, optional `region:` groups and an
/// optional `branch b: weight=<w>` table (all branches or none).
pub fn parse_track(text: &str) -> Result<(TrainTrack, Option<Measure>)> {
    let mut rows: Vec<(usize, [usize; 3])> = Vec::new();
    let mut groups = Vec::new();
    let mut raw_weights: Vec<(usize, usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("format:") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("switch ") {
            let (id, body) = rest.split_once(':').ok_or_else(|| parse_err(i, "missing ':'"))?;
            let items: Vec<&str> = body.split_whitespace().collect();
            if items.len() != 3 {
                return Err(parse_err(i, "switch needs lone=, top=, bottom="));
            }
            let l = parse_usize(i, key_value(i, items[0], "lone")?)?;
            let t = parse_usize(i, key_value(i, items[1], "top")?)?;
            let b = parse_usize(i, key_value(i, items[2], "bottom")?)?;
            rows.push((parse_usize(i, id)?, [l, t, b]));
        } else if let Some(rest) = line.strip_prefix("region:") {
            let items: Vec<&str> = rest.split_whitespace().collect();
            if items.len() != 2 {
                return Err(parse_err(i, "region needs darts= and genus="));
            }
            let darts = key_value(i, items[0], "darts")?
                .split(',')
                .map(|d| parse_usize(i, d))
                .collect::<Result<Vec<_>>>()?;
            let genus = parse_usize(i, key_value(i, items[1], "genus")?)?;
            groups.push(RegionGroup { darts, genus });
        } else if let Some(rest) = line.strip_prefix("branch ") {
            let (id, body) = rest.split_once(':').ok_or_else(|| parse_err(i, "missing ':'"))?;
            let w = key_value(i, body.trim(), "weight")?;
            raw_weights.push((i, parse_usize(i, id)?, w.to_string()));
        } else {
            return Err(parse_err(i, format!("unrecognised line '{line}'")));
        }
    }
    rows.sort_by_key(|r| r.0);
    for (k, (id, _)) in rows.iter().enumerate() {
        if *id != k {
            return Err(TrackError::Parse(format!("switch ids must be 0..{}, found {id}", rows.len())));
        }
    }
    let rows: Vec<[usize; 3]> = rows.into_iter().map(|r| r.1).collect();
    let track = TrainTrack::from_switches(&rows)?.with_groups(groups)?;
    if raw_weights.is_empty() {
        return Ok((track, None));
    }
    let nb = track.num_branches();
    let mut field: Option<Arc<NumberField>> = None;
    let mut parsed: Vec<Option<std::result::Result<NumberFieldElement, BigRational>>> = vec![None; nb];
    for (i, b, w) in raw_weights {
        if b >= nb {
            return Err(parse_err(i, format!("branch {b} out of range 0..{nb}")));
        }
        if parsed[b].is_some() {
            return Err(parse_err(i, format!("branch {b} listed twice")));
        }
        let v = if w.trim_start().starts_with("poly:") {
            Ok(parse_element(&w, &mut field).map_err(|e| parse_err(i, e))?)
        } else {
            Err(parse_rational(&w).map_err(|e| parse_err(i, e))?)
        };
        parsed[b] = Some(v);
    }
    let field = field.unwrap_or_else(NumberField::rationals);
    let mut weights = Vec::with_capacity(nb);
    for (b, p) in parsed.into_iter().enumerate() {
        match p {
            None => return Err(TrackError::Parse(format!("branch {b} has no weight"))),
            Some(Ok(e)) => weights.push(e),
            Some(Err(r)) => weights.push(NumberFieldElement::from_rational(&field, r)),
        }
    }
    Ok((track, Some(Measure::new(weights)?)))
}

