//! Simple lattice polytopes given by both vertices and facets, validated for
//! mutual consistency, together with their edge graphs and normal fans.
//!
//! Facets carry outer normals: facet `F` is where `⟨ξ_F, ·⟩` attains its
//! maximum over the polytope, so `support_value(ξ_F)` is the facet offset.

mod builtin;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{serde_q, IntVector, RatMatrix, Rational};

pub use builtin::{builtin, Builtin};

/// One facet: outer normal, the offset `max ⟨normal, x⟩` over the polytope,
/// and the indices of the vertices attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: IntVector,
    #[serde(with = "serde_q")]
    pub support: Rational,
    pub vertices: BTreeSet<usize>,
}

/// Unvalidated polytope data, exactly as it appears in a JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeData {
    pub dim: usize,
    pub vertices: Vec<IntVector>,
    pub facets: Vec<Facet>,
}

/// A validated simple, full-dimensional lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeData", into = "PolytopeData")]
pub struct Polytope {
    data: PolytopeData,
    // incidence[v] = facets containing vertex v
    incidence: Vec<BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    WrongLength { what: String, expected: usize, got: usize },
    TooFewVertices { got: usize, need: usize },
    DuplicateVertex { first: usize, second: usize },
    ZeroNormal { facet: usize },
    NonPrimitiveNormal { facet: usize },
    DuplicateFacet { first: usize, second: usize },
    VertexOutOfRange { facet: usize, index: usize },
    SupportMismatch { facet: usize, vertex: usize, value: String, support: String },
    SupportAttainedOffList { facet: usize, vertex: usize, value: String, support: String },
    SupportExceeded { facet: usize, vertex: usize, value: String, support: String },
    FacetTooSmall { facet: usize, affine_rank: usize },
    NotSimple { vertex: usize, facets: usize },
    DependentNormals { vertex: usize },
    NotFullDimensional { rank: usize },
    EdgeDegree { vertex: usize, degree: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        use Violation::*;
        match self {
            WrongLength { what, expected, got } => {
                write!(f, "{what} has length {got}, expected {expected}")
            }
            TooFewVertices { got, need } => write!(f, "{got} vertices, need at least {need}"),
            DuplicateVertex { first, second } => {
                write!(f, "vertices {first} and {second} coincide")
            }
            ZeroNormal { facet } => write!(f, "facet {facet} has zero normal"),
            NonPrimitiveNormal { facet } => write!(f, "facet {facet} normal is not primitive"),
            DuplicateFacet { first, second } => {
                write!(f, "facets {first} and {second} have the same normal")
            }
            VertexOutOfRange { facet, index } => {
                write!(f, "facet {facet} lists vertex {index}, which does not exist")
            }
            SupportMismatch { facet, vertex, value, support } => write!(
                f,
                "facet {facet}: listed vertex {vertex} has pairing {value}, support is {support}"
            ),
            SupportAttainedOffList { facet, vertex, value, support } => write!(
                f,
                "facet {facet}: unlisted vertex {vertex} attains the support {support} (pairing {value})"
            ),
            SupportExceeded { facet, vertex, value, support } => write!(
                f,
                "facet {facet}: vertex {vertex} has pairing {value} above the support {support}"
            ),
            FacetTooSmall { facet, affine_rank } => write!(
                f,
                "facet {facet}: vertex set spans affine dimension {affine_rank}, not a facet"
            ),
            NotSimple { vertex, facets } => {
                write!(f, "vertex {vertex} lies on {facets} facets (not simple)")
            }
            DependentNormals { vertex } => {
                write!(f, "facet normals at vertex {vertex} are linearly dependent")
            }
            NotFullDimensional { rank } => {
                write!(f, "vertex differences span only dimension {rank}")
            }
            EdgeDegree { vertex, degree } => {
                write!(f, "vertex {vertex} has {degree} incident edges")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

fn affine_rank(points: &[&IntVector]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<IntVector> = rest.iter().map(|p| p.sub(first)).collect();
    if diffs.is_empty() {
        return 0;
    }
    RatMatrix::from_int_rows(&diffs).map_or(0, |m| m.rank())
}

/// Checks facet/vertex consistency, simplicity and full dimension. Every
/// violation found is reported; nothing is repaired.
pub fn validate(p: &PolytopeData) -> ValidationReport {
    let d = p.dim;
    let mut out = Vec::new();

    for (i, v) in p.vertices.iter().enumerate() {
        if v.len() != d {
            out.push(Violation::WrongLength {
                what: format!("vertex {i}"),
                expected: d,
                got: v.len(),
            });
        }
    }
    for (i, f) in p.facets.iter().enumerate() {
        if f.normal.len() != d {
            out.push(Violation::WrongLength {
                what: format!("normal of facet {i}"),
                expected: d,
                got: f.normal.len(),
            });
        }
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }

    if p.vertices.len() < d + 1 {
        out.push(Violation::TooFewVertices {
            got: p.vertices.len(),
            need: d + 1,
        });
    }
    for i in 0..p.vertices.len() {
        for j in i + 1..p.vertices.len() {
            if p.vertices[i] == p.vertices[j] {
                out.push(Violation::DuplicateVertex { first: i, second: j });
            }
        }
    }
    for (i, f) in p.facets.iter().enumerate() {
        if f.normal.is_zero() {
            out.push(Violation::ZeroNormal { facet: i });
        } else if !f.normal.is_primitive() {
            out.push(Violation::NonPrimitiveNormal { facet: i });
        }
        for j in i + 1..p.facets.len() {
            if f.normal == p.facets[j].normal {
                out.push(Violation::DuplicateFacet { first: i, second: j });
            }
        }
    }

    // (a) support attained exactly on the listed vertices
    for (i, f) in p.facets.iter().enumerate() {
        for &idx in &f.vertices {
            if idx >= p.vertices.len() {
                out.push(Violation::VertexOutOfRange { facet: i, index: idx });
            }
        }
        for (j, v) in p.vertices.iter().enumerate() {
            let value = Rational::from_integer(f.normal.dot(v));
            let listed = f.vertices.contains(&j);
            let (value_s, support_s) = (value.to_string(), f.support.to_string());
            if listed && value != f.support {
                out.push(Violation::SupportMismatch {
                    facet: i,
                    vertex: j,
                    value: value_s,
                    support: support_s,
                });
            } else if !listed && value == f.support {
                out.push(Violation::SupportAttainedOffList {
                    facet: i,
                    vertex: j,
                    value: value_s,
                    support: support_s,
                });
            } else if !listed && value > f.support {
                out.push(Violation::SupportExceeded {
                    facet: i,
                    vertex: j,
                    value: value_s,
                    support: support_s,
                });
            }
        }
        let members: Vec<&IntVector> = f
            .vertices
            .iter()
            .filter_map(|&j| p.vertices.get(j))
            .collect();
        let r = affine_rank(&members);
        if d > 0 && r + 1 < d {
            out.push(Violation::FacetTooSmall {
                facet: i,
                affine_rank: r,
            });
        }
    }

    // (c) full dimension
    let all: Vec<&IntVector> = p.vertices.iter().collect();
    let rank = affine_rank(&all);
    if rank < d {
        out.push(Violation::NotFullDimensional { rank });
    }

    // (b) simplicity
    let incidence = incidence_of(p);
    let mut simple = true;
    for (v, fs) in incidence.iter().enumerate() {
        if fs.len() != d {
            simple = false;
            out.push(Violation::NotSimple {
                vertex: v,
                facets: fs.len(),
            });
            continue;
        }
        let normals: Vec<IntVector> = fs.iter().map(|&i| p.facets[i].normal.clone()).collect();
        if d > 0 && RatMatrix::from_int_rows(&normals).map_or(0, |m| m.rank()) < d {
            simple = false;
            out.push(Violation::DependentNormals { vertex: v });
        }
    }

    if simple && out.is_empty() {
        let mut degree = vec![0usize; p.vertices.len()];
        for (a, b) in incidence_edges(&incidence, d) {
            degree[a] += 1;
            degree[b] += 1;
        }
        for (v, &deg) in degree.iter().enumerate() {
            if deg != d {
                out.push(Violation::EdgeDegree {
                    vertex: v,
                    degree: deg,
                });
            }
        }
    }

    ValidationReport { violations: out }
}

fn incidence_of(p: &PolytopeData) -> Vec<BTreeSet<usize>> {
    let mut inc = vec![BTreeSet::new(); p.vertices.len()];
    for (i, f) in p.facets.iter().enumerate() {
        for &v in &f.vertices {
            if let Some(s) = inc.get_mut(v) {
                s.insert(i);
            }
        }
    }
    inc
}

fn incidence_edges(incidence: &[BTreeSet<usize>], d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..incidence.len() {
        for b in a + 1..incidence.len() {
            if incidence[a].intersection(&incidence[b]).count() + 1 == d {
                out.push((a, b));
            }
        }
    }
    out
}

impl TryFrom<PolytopeData> for Polytope {
    type Error = Error;

    fn try_from(data: PolytopeData) -> Result<Self> {
        Polytope::new(data)
    }
}

impl From<Polytope> for PolytopeData {
    fn from(p: Polytope) -> Self {
        p.data
    }
}

/// An edge between two vertices sharing `d − 1` facets. The direction is the
/// primitive vector from the lower-indexed endpoint to the higher.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub endpoints: (usize, usize),
    pub direction: IntVector,
}

impl Edge {
    /// The endpoint other than `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.endpoints.0 == v {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }
}

/// A maximal cone of the normal fan; its rays are the facets through `vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCone {
    pub vertex: usize,
    pub rays: Vec<usize>,
}

/// Normal fan: ray `i` is the normal of facet `i`; cone `i` belongs to vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<IntVector>,
    pub max_cones: Vec<MaxCone>,
}

impl Fan {
    /// Whether the rays in `set` lie in a common cone.
    pub fn is_face(&self, set: &BTreeSet<usize>) -> bool {
        self.max_cones
            .iter()
            .any(|c| set.iter().all(|r| c.rays.contains(r)))
    }

    /// All cones (as ray index sets, including the zero cone), sorted by size
    /// then lexicographically.
    pub fn all_cones(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = BTreeSet::new();
        for c in &self.max_cones {
            let k = c.rays.len();
            for mask in 0u64..(1 << k) {
                let s: BTreeSet<usize> = (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| c.rays[i])
                    .collect();
                seen.insert((s.len(), s));
            }
        }
        seen.into_iter().map(|(_, s)| s).collect()
    }

    /// Row matrix of the primitive rays of cone `c`, in the cone's ray order.
    pub fn cone_matrix(&self, c: usize) -> RatMatrix {
        let rows: Vec<IntVector> = self.max_cones[c]
            .rays
            .iter()
            .map(|&r| self.rays[r].clone())
            .collect();
        RatMatrix::from_int_rows(&rows).expect("rays share the ambient dimension")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeWitness {
    pub vertex: usize,
    pub determinant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub witness: Option<ConeWitness>,
}

/// A fan is smooth iff every maximal cone's ray matrix is unimodular. The
/// witness is the first offending cone in vertex order.
pub fn is_smooth(fan: &Fan) -> SmoothnessReport {
    for c in 0..fan.max_cones.len() {
        let det = fan
            .cone_matrix(c)
            .determinant()
            .expect("cone matrices are square");
        if det.abs() != Rational::from_integer(BigInt::from(1)) {
            return SmoothnessReport {
                smooth: false,
                witness: Some(ConeWitness {
                    vertex: fan.max_cones[c].vertex,
                    determinant: det.to_string(),
                }),
            };
        }
    }
    SmoothnessReport {
        smooth: true,
        witness: None,
    }
}

impl Polytope {
    pub fn new(data: PolytopeData) -> Result<Self> {
        let report = validate(&data);
        if !report.is_valid() {
            return Err(Error::Invalid(report));
        }
        let incidence = incidence_of(&data);
        Ok(Polytope { data, incidence })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let data: PolytopeData = serde_json::from_str(s)?;
        Polytope::new(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.data).expect("polytope data always serializes")
    }

    pub fn data(&self) -> &PolytopeData {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.data.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.data.facets
    }

    pub fn num_vertices(&self) -> usize {
        self.data.vertices.len()
    }

    pub fn num_facets(&self) -> usize {
        self.data.facets.len()
    }

    /// Facets containing vertex `v`, ascending.
    pub fn vertex_facets(&self, v: usize) -> &BTreeSet<usize> {
        &self.incidence[v]
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.data)
    }

    /// `max_{x ∈ Δ} ⟨ξ, x⟩`, attained at a vertex.
    pub fn support_value(&self, xi: &IntVector) -> Result<Rational> {
        if xi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: xi.len(),
            });
        }
        let best = self
            .vertices()
            .iter()
            .map(|v| xi.dot(v))
            .max()
            .unwrap_or_else(BigInt::zero);
        Ok(Rational::from_integer(best))
    }

    /// All edges, ordered by endpoint pair.
    pub fn edges(&self) -> Vec<Edge> {
        incidence_edges(&self.incidence, self.dim())
            .into_iter()
            .map(|(a, b)| Edge {
                endpoints: (a, b),
                direction: self.vertices()[b]
                    .sub(&self.vertices()[a])
                    .primitive()
                    .expect("vertices are distinct"),
            })
            .collect()
    }

    /// Edges incident to `v`.
    pub fn edges_at(&self, v: usize) -> Vec<Edge> {
        self.edges()
            .into_iter()
            .filter(|e| e.endpoints.0 == v || e.endpoints.1 == v)
            .collect()
    }

    pub fn normal_fan(&self) -> Fan {
        Fan {
            dim: self.dim(),
            rays: self.facets().iter().map(|f| f.normal.clone()).collect(),
            max_cones: (0..self.num_vertices())
                .map(|v| MaxCone {
                    vertex: v,
                    rays: self.incidence[v].iter().copied().collect(),
                })
                .collect(),
        }
    }

    /// Cartesian product; facets of `self` (padded) come first.
    pub fn product(&self, other: &Polytope) -> Result<Polytope> {
        let (d1, d2) = (self.dim(), other.dim());
        let n2 = other.num_vertices();
        let vertices: Vec<IntVector> = self
            .vertices()
            .iter()
            .flat_map(|v| other.vertices().iter().map(move |w| v.concat(w)))
            .collect();
        let mut facets = Vec::new();
        for f in self.facets() {
            facets.push(Facet {
                normal: f.normal.concat(&IntVector::zeros(d2)),
                support: f.support.clone(),
                vertices: f
                    .vertices
                    .iter()
                    .flat_map(|&i| (0..n2).map(move |j| i * n2 + j))
                    .collect(),
            });
        }
        for g in other.facets() {
            facets.push(Facet {
                normal: IntVector::zeros(d1).concat(&g.normal),
                support: g.support.clone(),
                vertices: (0..self.num_vertices())
                    .flat_map(|i| g.vertices.iter().map(move |&j| i * n2 + j))
                    .collect(),
            });
        }
        Polytope::new(PolytopeData {
            dim: d1 + d2,
            vertices,
            facets,
        })
    }
}
