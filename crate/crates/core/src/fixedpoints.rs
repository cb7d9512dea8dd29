//! The functions `f_ρ` on the torus-fixed points.
//!
//! Fixed points are indexed by vertices of the polytope (equivalently maximal
//! cones of the normal fan) and `ρ` by facets (rays). For a vertex `v` on
//! facet `F_ρ`, `u_{v,ρ}` is the vector along the unique edge at `v` leaving
//! `F_ρ`, scaled so that `⟨u_{v,ρ}, ξ_ρ⟩ = 1`; then `f_ρ(v) = ⟨γ, u_{v,ρ}⟩`
//! and `f_ρ(v) = 0` off the facet.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{count_negative, serde_q, IntVector, RatMatrix, Rational};
use crate::polytope::{is_smooth, Edge, Fan, Polytope};

/// A one-parameter subgroup that is generic for a given polytope: it pairs
/// nonzero with every edge direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma(IntVector);

impl Gamma {
    pub fn new(p: &Polytope, v: IntVector) -> Result<Self> {
        if v.len() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                got: v.len(),
            });
        }
        let report = is_generic(p, &v);
        if report.generic {
            return Ok(Gamma(v));
        }
        // the zero vector pairs to zero with every edge, so a witness exists
        let edge = report.witness.expect("polytopes of dimension ≥ 1 have edges");
        Err(not_generic(&v, &edge))
    }

    pub fn vector(&self) -> &IntVector {
        &self.0
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.to_rational()
    }
}

fn not_generic(gamma: &IntVector, e: &Edge) -> Error {
    Error::NotGeneric {
        gamma: gamma.clone(),
        a: e.endpoints.0,
        b: e.endpoints.1,
        direction: e.direction.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub witness: Option<Edge>,
}

/// `γ` is generic iff `⟨γ, e⟩ ≠ 0` for every edge direction `e`. The witness
/// is the first offending edge in endpoint order.
pub fn is_generic(p: &Polytope, gamma: &IntVector) -> GenericityReport {
    if gamma.len() != p.dim() {
        return GenericityReport {
            generic: false,
            witness: None,
        };
    }
    let witness = p
        .edges()
        .into_iter()
        .find(|e| gamma.dot(&e.direction).is_zero());
    GenericityReport {
        generic: witness.is_none() && !gamma.is_zero(),
        witness,
    }
}

const SEED_OFFSET_RADIUS: i64 = 16;

/// Deterministic search for a generic `γ`.
///
/// Candidates are `o + w`, where `w` runs over the integer vectors of
/// max-norm `r = 0, 1, 2, …`, each shell in lexicographic order, and the
/// offset `o` is zero for seed 0 and otherwise drawn uniformly from
/// `[-16, 16]^d` by a ChaCha8 generator seeded with `seed`. The first
/// generic candidate is returned.
pub fn sample_generic(p: &Polytope, seed: u64) -> Gamma {
    let d = p.dim();
    let offset: Vec<i64> = if seed == 0 {
        vec![0; d]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..d)
            .map(|_| rng.gen_range(-SEED_OFFSET_RADIUS..=SEED_OFFSET_RADIUS))
            .collect()
    };
    let edges = p.edges();
    for r in 0i64.. {
        for w in shell(d, r) {
            let cand = IntVector::from(
                offset
                    .iter()
                    .zip(&w)
                    .map(|(o, x)| o + x)
                    .collect::<Vec<i64>>(),
            );
            if !cand.is_zero() && edges.iter().all(|e| !cand.dot(&e.direction).is_zero()) {
                return Gamma(cand);
            }
        }
    }
    unreachable!("generic vectors avoid finitely many hyperplanes")
}

/// Integer vectors of max-norm exactly `r`, lexicographic.
fn shell(d: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; d];
    loop {
        if cur.iter().any(|x| x.abs() == r) || d == 0 {
            out.push(cur.clone());
        }
        // odometer increment
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                for x in &mut cur[i + 1..] {
                    *x = -r;
                }
                break;
            }
        }
    }
}

fn facet_position(p: &Polytope, v: usize, facet: usize) -> Result<usize> {
    p.vertex_facets(v)
        .iter()
        .position(|&f| f == facet)
        .ok_or(Error::NotIncident { vertex: v, facet })
}

/// Row matrix `A` of the facet normals at `v`, facets ascending.
pub fn vertex_normal_matrix(p: &Polytope, v: usize) -> RatMatrix {
    let rows: Vec<IntVector> = p
        .vertex_facets(v)
        .iter()
        .map(|&f| p.facets()[f].normal.clone())
        .collect();
    RatMatrix::from_int_rows(&rows).expect("normals share the ambient dimension")
}

/// `u_{v,ρ}` as the column of `A⁻¹` belonging to facet `facet`, where `A` has
/// the facet normals at `v` as rows.
pub fn edge_vector(p: &Polytope, v: usize, facet: usize) -> Result<Vec<Rational>> {
    let col = facet_position(p, v, facet)?;
    let b = vertex_normal_matrix(p, v).inverse()?;
    Ok(b.column(col))
}

/// `u_{v,ρ}` by moving facet `facet` outward by `eps` and following the edge
/// at `v` that leaves the facet to the displaced vertex `v'`:
/// `u = (v − v') / ⟨ξ, v − v'⟩`. Uses only incidence data, no inversion.
pub fn edge_vector_by_facet_shift(
    p: &Polytope,
    v: usize,
    facet: usize,
    eps: &Rational,
) -> Result<Vec<Rational>> {
    facet_position(p, v, facet)?;
    let stay: Vec<usize> = p
        .vertex_facets(v)
        .iter()
        .copied()
        .filter(|&f| f != facet)
        .collect();
    let w = p
        .edges_at(v)
        .into_iter()
        .map(|e| e.other(v))
        .find(|&w| {
            let fw = p.vertex_facets(w);
            !fw.contains(&facet) && stay.iter().all(|f| fw.contains(f))
        })
        .expect("a simple polytope has exactly one edge leaving each facet at a vertex");
    let xi = &p.facets()[facet].normal;
    let vv = p.vertices()[v].to_rational();
    let step = p.vertices()[w].sub(&p.vertices()[v]);
    let t = eps / Rational::from_integer(xi.dot(&step));
    let step = step.to_rational();
    let moved: Vec<Rational> = vv.iter().zip(&step).map(|(a, s)| a + &t * s).collect();
    let diff: Vec<Rational> = vv.iter().zip(&moved).map(|(a, b)| a - b).collect();
    let scale = xi.dot_rat(&diff);
    Ok(diff.into_iter().map(|x| x / &scale).collect())
}

/// Values of `f_ρ` and `f_Δ` on the fixed points.
#[derive(Clone, Debug)]
pub struct FixedPointTable {
    pub polytope: Polytope,
    pub fan: Fan,
    pub gamma: Gamma,
    /// `f[ρ][z]`: rows are rays, columns are fixed points.
    pub f: RatMatrix,
    /// `f_Δ(z) = ⟨γ, v_z⟩`.
    pub f_delta: Vec<Rational>,
    /// `u_{z,ρ}` keyed by `(vertex, facet)`.
    pub u_vectors: BTreeMap<(usize, usize), Vec<Rational>>,
}

pub fn f_table(p: &Polytope, gamma: &Gamma) -> Result<FixedPointTable> {
    let fan = p.normal_fan();
    let smooth = is_smooth(&fan);
    if let Some(w) = smooth.witness {
        return Err(Error::NotSmooth {
            vertex: w.vertex,
            determinant: w.determinant,
        });
    }
    let gen = is_generic(p, gamma.vector());
    if let Some(e) = gen.witness {
        return Err(not_generic(gamma.vector(), &e));
    }
    let g = gamma.vector();
    let mut f = RatMatrix::zeros(p.num_facets(), p.num_vertices());
    let mut u_vectors = BTreeMap::new();
    for z in 0..p.num_vertices() {
        let b = vertex_normal_matrix(p, z).inverse()?;
        for (col, &rho) in p.vertex_facets(z).iter().enumerate() {
            let u = b.column(col);
            if cfg!(debug_assertions) {
                for eps in [1, 2] {
                    let shifted =
                        edge_vector_by_facet_shift(p, z, rho, &Rational::from_integer(eps.into()))?;
                    assert_eq!(u, shifted, "edge vector routes disagree at vertex {z}, facet {rho}");
                }
            }
            f.set(rho, z, g.dot_rat(&u));
            u_vectors.insert((z, rho), u);
        }
    }
    let f_delta = p
        .vertices()
        .iter()
        .map(|v| Rational::from_integer(g.dot(v)))
        .collect();
    Ok(FixedPointTable {
        polytope: p.clone(),
        fan,
        gamma: gamma.clone(),
        f,
        f_delta,
        u_vectors,
    })
}

/// The image `𝒵 = Θ(Z)`: one point of `ℚ^{#rays}` per fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaSet {
    #[serde(with = "serde_q::mat")]
    pub points: Vec<Vec<Rational>>,
}

impl ZetaSet {
    pub fn is_injective(&self) -> bool {
        let mut sorted = self.points.clone();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

impl FixedPointTable {
    pub fn num_points(&self) -> usize {
        self.f.cols()
    }

    pub fn num_rays(&self) -> usize {
        self.f.rows()
    }

    /// Values of `f_ρ` across the fixed points.
    pub fn row(&self, rho: usize) -> &[Rational] {
        self.f.row(rho)
    }

    pub fn theta(&self) -> ZetaSet {
        ZetaSet {
            points: (0..self.num_points()).map(|z| self.f.column(z)).collect(),
        }
    }

    /// Twice the number of negative coordinates of each `Θ(z)`. Checked
    /// against the edge count from [`morse_indices_from_edges`].
    pub fn morse_indices(&self) -> Vec<usize> {
        let from_theta: Vec<usize> = self
            .theta()
            .points
            .iter()
            .map(|pt| 2 * count_negative(pt))
            .collect();
        let from_edges = morse_indices_from_edges(&self.polytope, self.gamma.vector());
        assert_eq!(from_theta, from_edges, "Morse index definitions disagree");
        from_theta
    }

    pub fn document(&self) -> TableDocument {
        TableDocument {
            gamma: self.gamma.vector().clone(),
            rays: self.fan.rays.clone(),
            vertices: self.polytope.vertices().to_vec(),
            f: self.f.to_rows(),
            f_delta: self.f_delta.clone(),
            zeta: self.theta().points,
            morse: self.morse_indices(),
        }
    }

    /// Rows are rays, columns are fixed points, cells are exact `p/q` strings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.num_rays() {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Per vertex, twice the number of incident edges along which `⟨γ, ·⟩`
/// increases when leaving the vertex.
///
/// `u_{v,ρ}` points away from the polytope along its edge, so
/// `f_ρ(v) < 0` exactly when `γ` increases along the edge into the polytope.
pub fn morse_indices_from_edges(p: &Polytope, gamma: &IntVector) -> Vec<usize> {
    let edges = p.edges();
    (0..p.num_vertices())
        .map(|v| {
            let up = edges
                .iter()
                .filter(|e| e.endpoints.0 == v || e.endpoints.1 == v)
                .filter(|e| {
                    let w = e.other(v);
                    gamma.dot(&p.vertices()[w].sub(&p.vertices()[v])).is_positive()
                })
                .count();
            2 * up
        })
        .collect()
}

/// JSON form of a fixed-point table.
#[derive(Clone, Debug, Serialize)]
pub struct TableDocument {
    pub gamma: IntVector,
    pub rays: Vec<IntVector>,
    pub vertices: Vec<IntVector>,
    #[serde(with = "serde_q::mat")]
    pub f: Vec<Vec<Rational>>,
    #[serde(with = "serde_q::vec")]
    pub f_delta: Vec<Rational>,
    #[serde(with = "serde_q::mat")]
    pub zeta: Vec<Vec<Rational>>,
    pub morse: Vec<usize>,
}
