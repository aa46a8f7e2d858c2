//! Closed oriented surfaces as rotation systems, their triangulations, and
//! spines.
//!
//! Faces are orbits of `d ↦ rot(opp(d))`. Genus is always derived from the
//! Euler characteristic, never stored.

mod map;
mod spine;

use std::fmt;

use thiserror::Error;

pub use map::{
    canonical_code, components, extend_iso, face_orbits, is_isomorphic, isomorphisms, orbits,
    vertex_orbits, Colored, CombSurface, DartMap, NONE,
};
pub use spine::{Spine, SpineDiagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfError {
    #[error("FixedPointInOpposite: dart {0} is its own opposite")]
    FixedPointInOpposite(usize),
    #[error("NonPermutation: rotation or opposite data is not a permutation")]
    NonPermutation,
    #[error("OddDartCount: {0} darts")]
    OddDartCount(usize),
    #[error("Disconnected: surface data has several components")]
    Disconnected,
    #[error("NonTriangularFace: face of length {0}")]
    NonTriangularFace(usize),
    #[error("CountMismatch: {0}")]
    CountMismatch(String),
    #[error("NotTrivalent: vertex {0} has valence {1}")]
    NotTrivalent(usize, usize),
    #[error("NotOneVertex: triangulation has {0} vertices")]
    NotOneVertex(usize),
    #[error("NotASpine: {0}")]
    NotASpine(SpineDiagnostic),
    #[error("ComplementNotDisc: {0}")]
    ComplementNotDisc(SpineDiagnostic),
    #[error("SphereCarrier: the 2-sphere has no spine")]
    SphereCarrier,
    #[error("ParseError: {0}")]
    Parse(String),
}

/// Counts of a checked triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangulationReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub one_vertex: bool,
}

impl fmt::Display for TriangulationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "V={} E={} F={} genus={} one_vertex={}",
            self.vertices, self.edges, self.faces, self.genus, self.one_vertex
        )
    }
}

/// Validates that every face is a triangle and that the counts obey
/// F = 2V + 4g − 4 and E = 3V + 6g − 6.
pub fn check_triangulation(
    t: &CombSurface,
    expected_vertices: Option<usize>,
) -> Result<TriangulationReport, SurfError> {
    for f in t.faces() {
        if f.len() != 3 {
            return Err(SurfError::NonTriangularFace(f.len()));
        }
    }
    let (v, e, f) = t.counts();
    let g = t.genus() as i64;
    let (vi, ei, fi) = (v as i64, e as i64, f as i64);
    if 3 * fi != 2 * ei || fi != 2 * vi + 4 * g - 4 || ei != 3 * vi + 6 * g - 6 {
        return Err(SurfError::CountMismatch(format!("V={v} E={e} F={f} g={g}")));
    }
    if let Some(ev) = expected_vertices {
        if ev != v {
            return Err(SurfError::CountMismatch(format!("expected {ev} vertices, found {v}")));
        }
    }
    Ok(TriangulationReport {
        vertices: v,
        edges: e,
        faces: f,
        genus: g as usize,
        one_vertex: v == 1,
    })
}

/// A triangulated closed surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation2 {
    surface: CombSurface,
}

impl Triangulation2 {
    pub fn new(surface: CombSurface) -> Result<Self, SurfError> {
        check_triangulation(&surface, None)?;
        Ok(Triangulation2 { surface })
    }

    pub(crate) fn new_unchecked(surface: CombSurface) -> Self {
        Triangulation2 { surface }
    }

    pub fn surface(&self) -> &CombSurface {
        &self.surface
    }

    pub fn report(&self) -> TriangulationReport {
        check_triangulation(&self.surface, None).expect("validated at construction")
    }

    pub fn num_vertices(&self) -> usize {
        self.surface.vertices().len()
    }

    pub fn num_triangles(&self) -> usize {
        self.surface.num_darts() / 3
    }

    pub fn genus(&self) -> usize {
        self.surface.genus()
    }

    /// Triangles as dart triples, each starting at its least dart.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        self.surface
            .faces()
            .into_iter()
            .map(|f| [f[0], f[1], f[2]])
            .collect()
    }

    pub fn canonical(&self) -> Triangulation2 {
        Triangulation2 { surface: self.surface.canonical() }
    }

    /// Isomorphic as triangulated surfaces (rotation preserving).
    pub fn same_up_to_relabeling(&self, other: &Triangulation2) -> bool {
        is_isomorphic(&self.surface, &other.surface)
    }
}

/// Result of [`dualize`].
#[derive(Debug, Clone)]
pub enum Dual {
    Triangulation(Triangulation2),
    Spine(Spine),
}

/// A trivalent spine to its dual one-vertex triangulation.
pub fn spine_to_triangulation(s: &Spine) -> Result<Triangulation2, SurfError> {
    for (v, orb) in s.vertices().iter().enumerate() {
        if orb.len() != 3 {
            return Err(SurfError::NotTrivalent(v, orb.len()));
        }
    }
    let (map, _) = s.to_surface();
    Triangulation2::new(map.dual())
}

/// A one-vertex triangulation to its dual trivalent spine.
pub fn triangulation_to_spine(t: &Triangulation2) -> Result<Spine, SurfError> {
    let v = t.num_vertices();
    if v != 1 {
        return Err(SurfError::NotOneVertex(v));
    }
    Spine::from_surface(&t.surface().dual())
}

pub fn dualize(x: &Dual) -> Result<Dual, SurfError> {
    match x {
        Dual::Spine(s) => spine_to_triangulation(s).map(Dual::Triangulation),
        Dual::Triangulation(t) => triangulation_to_spine(t).map(Dual::Spine),
    }
}

/// Checks whether a set of darts of `carrier`, closed under `opp`, is a spine:
/// its complement is one disc and no vertex has valence below 3.
pub fn is_spine(carrier: &CombSurface, darts: &[usize]) -> Result<(), SpineDiagnostic> {
    let sub = Spine::induced(carrier, darts)?;
    if carrier.genus() == 0 {
        return Err(SpineDiagnostic::SphereCarrier);
    }
    sub.diagnose_against(carrier.euler_characteristic())
}

/// The standard one-vertex spine of genus `g`: a bouquet of 2g circles whose
/// complement is the 4g-gon with word a1 b1 a1⁻¹ b1⁻¹ ….
pub fn bouquet(g: usize) -> Spine {
    assert!(g >= 1);
    let n = 4 * g;
    // polygon side i is traversed by dart side[i]; sides 4k,4k+1,4k+2,4k+3 are a, b, a⁻¹, b⁻¹
    let mut side = vec![0usize; n];
    for k in 0..g {
        let a = 2 * k;
        let b = 2 * k + 1;
        side[4 * k] = 2 * a;
        side[4 * k + 1] = 2 * b;
        side[4 * k + 2] = 2 * a + 1;
        side[4 * k + 3] = 2 * b + 1;
    }
    // face_next(side[i]) = side[i+1] means rot(opp(side[i])) = side[i+1]
    let mut rot = vec![NONE; n];
    for i in 0..n {
        rot[side[i] ^ 1] = side[(i + 1) % n];
    }
    Spine::from_rot(rot)
}
