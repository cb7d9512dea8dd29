//! Continuous piecewise polynomials on the normal fan and the map `Φ` to
//! functions on the fixed points.
//!
//! A piecewise polynomial holds one polynomial per maximal cone (cone `i`
//! belongs to vertex `i`). The generator `g_ρ` is, on each cone containing
//! `ρ`, the linear form dual to `ξ_ρ` in the basis of the cone's rays, and 0
//! on every other cone. For a homogeneous piece of degree `n`,
//! `Φ(p) = (1/n!) ∂ⁿp/∂γⁿ` is constant on each cone, hence a function on
//! the fixed points. The `1/n!` factor makes `Φ` multiplicative.

mod poly;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{hadamard, is_constant, serde_q, EchelonBasis, Rational};
use crate::fixedpoints::{f_table, Gamma};
use crate::graded::filtration_ranks;
use crate::monomial::{self, Monomial};
use crate::polytope::{Fan, Polytope};

pub use poly::{Poly, TermDoc};

/// Two maximal cones sharing `d − 1` rays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub a: usize,
    pub b: usize,
    pub shared: Vec<usize>,
}

/// Every pair of adjacent maximal cones, once, ordered by `(a, b)`.
pub fn walls(fan: &Fan) -> Vec<Wall> {
    let d = fan.dim;
    let mut out = Vec::new();
    for a in 0..fan.max_cones.len() {
        for b in a + 1..fan.max_cones.len() {
            let shared: Vec<usize> = fan.max_cones[a]
                .rays
                .iter()
                .copied()
                .filter(|r| fan.max_cones[b].rays.contains(r))
                .collect();
            if shared.len() + 1 == d {
                out.push(Wall { a, b, shared });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    fan: Arc<Fan>,
    polys: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub continuous: bool,
    pub witness: Option<Wall>,
}

/// JSON form of a piecewise polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct PiecewiseDocument {
    pub cones: Vec<usize>,
    pub polys: Vec<Vec<TermDoc>>,
}

impl PiecewisePoly {
    pub fn new(fan: Arc<Fan>, polys: Vec<Poly>) -> Result<Self> {
        if polys.len() != fan.max_cones.len() {
            return Err(Error::DimensionMismatch {
                expected: fan.max_cones.len(),
                got: polys.len(),
            });
        }
        if let Some(p) = polys.iter().find(|p| p.nvars() != fan.dim) {
            return Err(Error::DimensionMismatch {
                expected: fan.dim,
                got: p.nvars(),
            });
        }
        Ok(PiecewisePoly { fan, polys })
    }

    /// The same polynomial on every cone.
    pub fn global(fan: Arc<Fan>, p: Poly) -> Result<Self> {
        let polys = vec![p; fan.max_cones.len()];
        PiecewisePoly::new(fan, polys)
    }

    pub fn one(fan: Arc<Fan>) -> Self {
        let p = Poly::one(fan.dim);
        PiecewisePoly::global(fan, p).expect("sizes match")
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn on_cone(&self, c: usize) -> &Poly {
        &self.polys[c]
    }

    pub fn degree(&self) -> usize {
        self.polys
            .iter()
            .filter_map(Poly::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// The common degree of the nonzero cone polynomials, if they are all
    /// homogeneous of one degree.
    pub fn homogeneous_degree(&self) -> Result<usize> {
        let mut degree = None;
        for (c, p) in self.polys.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let k = p.homogeneous_degree().ok_or(Error::NotHomogeneous { cone: c })?;
            match degree {
                None => degree = Some(k),
                Some(prev) if prev != k => return Err(Error::NotHomogeneous { cone: c }),
                _ => {}
            }
        }
        Ok(degree.unwrap_or(0))
    }

    fn check_same_fan(&self, other: &PiecewisePoly) {
        assert!(
            Arc::ptr_eq(&self.fan, &other.fan) || self.fan == other.fan,
            "piecewise polynomials live on different fans"
        );
    }

    pub fn mul(&self, other: &PiecewisePoly) -> PiecewisePoly {
        self.check_same_fan(other);
        PiecewisePoly {
            fan: self.fan.clone(),
            polys: self
                .polys
                .iter()
                .zip(&other.polys)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &PiecewisePoly) -> PiecewisePoly {
        self.check_same_fan(other);
        PiecewisePoly {
            fan: self.fan.clone(),
            polys: self
                .polys
                .iter()
                .zip(&other.polys)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> PiecewisePoly {
        PiecewisePoly {
            fan: self.fan.clone(),
            polys: self.polys.iter().map(|p| p.scale(k)).collect(),
        }
    }

    /// Restricts each adjacent pair of cone polynomials to their shared wall,
    /// parametrized as `x = Σ_j s_j ξ_{ρ_j}`, and checks that the difference
    /// vanishes identically in `s`.
    pub fn is_continuous(&self) -> ContinuityReport {
        let d = self.fan.dim;
        for wall in walls(&self.fan) {
            let m = wall.shared.len();
            let images: Vec<Poly> = (0..d)
                .map(|k| {
                    let coeffs: Vec<Rational> = wall
                        .shared
                        .iter()
                        .map(|&r| Rational::from_integer(self.fan.rays[r][k].clone()))
                        .collect();
                    if m == 0 {
                        Poly::zero(0)
                    } else {
                        Poly::linear(&coeffs)
                    }
                })
                .collect();
            let diff = self.polys[wall.a].sub(&self.polys[wall.b]);
            if !diff.compose(&images).is_zero() {
                return ContinuityReport {
                    continuous: false,
                    witness: Some(wall),
                };
            }
        }
        ContinuityReport {
            continuous: true,
            witness: None,
        }
    }

    pub fn document(&self) -> PiecewiseDocument {
        PiecewiseDocument {
            cones: (0..self.polys.len()).collect(),
            polys: self.polys.iter().map(Poly::to_terms).collect(),
        }
    }
}

/// The generator `g_ρ`: on each cone containing `ρ`, the linear form that is
/// 1 on `ξ_ρ` and 0 on the cone's other rays; zero elsewhere.
pub fn make_g(fan: &Arc<Fan>, rho: usize) -> Result<PiecewisePoly> {
    let d = fan.dim;
    let mut polys = Vec::with_capacity(fan.max_cones.len());
    for (c, cone) in fan.max_cones.iter().enumerate() {
        match cone.rays.iter().position(|&r| r == rho) {
            Some(col) => {
                let dual = fan.cone_matrix(c).inverse()?;
                polys.push(Poly::linear(&dual.column(col)));
            }
            None => polys.push(Poly::zero(d)),
        }
    }
    PiecewisePoly::new(fan.clone(), polys)
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

/// `Φ(p) = (1/n!) ∂ⁿp/∂γⁿ` on each cone, for `p` homogeneous of degree `n`.
pub fn phi(pp: &PiecewisePoly, gamma: &Gamma) -> Result<Vec<Rational>> {
    let n = pp.homogeneous_degree()?;
    let dir = gamma.to_rational();
    if dir.len() != pp.fan.dim {
        return Err(Error::DimensionMismatch {
            expected: pp.fan.dim,
            got: dir.len(),
        });
    }
    let norm = factorial(n).recip();
    Ok(pp
        .polys
        .iter()
        .map(|p| {
            let derived = (0..n).fold(p.clone(), |q, _| q.directional_derivative(&dir));
            debug_assert!(derived.total_degree().unwrap_or(0) == 0);
            derived.constant_term() * &norm
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFormImage {
    pub coordinate: usize,
    #[serde(with = "serde_q::vec")]
    pub values: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub expected: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrionReport {
    pub generators_continuous: bool,
    pub discontinuous_generators: Vec<usize>,
    /// `Φ(g_ρ) = f_ρ` for every ray.
    pub phi_g_matches_f: bool,
    pub phi_g_mismatches: Vec<usize>,
    pub linear_forms: Vec<LinearFormImage>,
    pub linear_forms_constant: bool,
    pub products_checked: usize,
    pub multiplicative: bool,
    pub product_failures: Vec<ProductWitness>,
    /// Rank of `{Φ(m) : m a g-monomial of degree ≤ i}` for `i = 0..=d`.
    pub surjectivity_ranks: Vec<usize>,
    /// `dim F_i` for `i = 0..=d`.
    pub filtration_ranks: Vec<usize>,
    pub ranks_match: bool,
}

impl BrionReport {
    pub fn all_ok(&self) -> bool {
        self.generators_continuous
            && self.phi_g_matches_f
            && self.linear_forms_constant
            && self.multiplicative
            && self.ranks_match
    }
}

/// Products of g-monomials, built by multiplying prefixes.
struct GMonomials {
    one: PiecewisePoly,
    g: Vec<PiecewisePoly>,
    cache: BTreeMap<Monomial, PiecewisePoly>,
}

impl GMonomials {
    fn get(&mut self, m: &[usize]) -> PiecewisePoly {
        if let Some(p) = self.cache.get(m) {
            return p.clone();
        }
        let p = match m.split_last() {
            None => self.one.clone(),
            Some((&last, prefix)) => self.get(prefix).mul(&self.g[last]),
        };
        self.cache.insert(m.to_vec(), p.clone());
        p
    }
}

/// Whether a pair of monomial degrees is covered by the multiplicativity
/// check: both factors of degree ≤ 2, or total degree ≤ d.
fn pair_checked(a: usize, b: usize, d: usize) -> bool {
    a >= 1 && b >= 1 && ((a <= 2 && b <= 2) || a + b <= d)
}

/// Checks `Φ(g_ρ) = f_ρ`, that global linear forms land in the constants,
/// multiplicativity of `Φ` on products of g-monomials, and that the images
/// of g-monomials of degree `≤ i` span `F_i` for `i ≤ d`.
pub fn verify_brion(p: &Polytope, gamma: &Gamma, cap: Option<usize>) -> Result<BrionReport> {
    let t = f_table(p, gamma)?;
    let fan = Arc::new(t.fan.clone());
    let d = fan.dim;
    let n = fan.rays.len();

    let g: Vec<PiecewisePoly> = (0..n).map(|r| make_g(&fan, r)).collect::<Result<_>>()?;
    let discontinuous_generators: Vec<usize> = g
        .iter()
        .enumerate()
        .filter(|(_, gr)| !gr.is_continuous().continuous)
        .map(|(r, _)| r)
        .collect();

    let mut phi_g_mismatches = Vec::new();
    for (r, gr) in g.iter().enumerate() {
        if phi(gr, gamma)? != t.row(r) {
            phi_g_mismatches.push(r);
        }
    }

    let mut linear_forms = Vec::new();
    for j in 0..d {
        let form = PiecewisePoly::global(fan.clone(), Poly::variable(d, j))?;
        let values = phi(&form, gamma)?;
        let expected = Rational::from_integer(gamma.vector()[j].clone());
        let ok = is_constant(&values) && values.iter().all(|v| *v == expected);
        linear_forms.push(LinearFormImage {
            coordinate: j,
            values,
            expected,
            ok,
        });
    }

    let mut gm = GMonomials {
        one: PiecewisePoly::one(fan.clone()),
        g,
        cache: BTreeMap::new(),
    };
    let max_factor = d.max(2);
    let factors: Vec<Monomial> = (1..=max_factor)
        .flat_map(|k| monomial::of_degree(n, k))
        .collect();
    let mut products_checked = 0;
    let mut product_failures = Vec::new();
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i..] {
            if !pair_checked(a.len(), b.len(), d) {
                continue;
            }
            let (pa, pb) = (gm.get(a), gm.get(b));
            let lhs = phi(&pa.mul(&pb), gamma)?;
            let rhs = hadamard(&phi(&pa, gamma)?, &phi(&pb, gamma)?);
            products_checked += 1;
            if lhs != rhs {
                product_failures.push(ProductWitness {
                    lhs: monomial::exponents(a, n),
                    rhs: monomial::exponents(b, n),
                });
            }
        }
    }

    let fr = filtration_ranks(&t, cap)?;
    let filtration: Vec<usize> = (0..=d)
        .map(|i| fr.ranks.get(i).copied().unwrap_or(t.num_points()))
        .collect();
    let mut span = EchelonBasis::new(t.num_points());
    let mut surjectivity_ranks = Vec::new();
    for i in 0..=d {
        for m in monomial::of_degree(n, i) {
            if span.rank() == t.num_points() {
                break;
            }
            span.insert(&phi(&gm.get(&m), gamma)?);
        }
        surjectivity_ranks.push(span.rank());
    }

    Ok(BrionReport {
        generators_continuous: discontinuous_generators.is_empty(),
        discontinuous_generators,
        phi_g_matches_f: phi_g_mismatches.is_empty(),
        phi_g_mismatches,
        linear_forms_constant: linear_forms.iter().all(|l| l.ok),
        linear_forms,
        products_checked,
        multiplicative: product_failures.is_empty(),
        product_failures,
        ranks_match: surjectivity_ranks == filtration,
        surjectivity_ranks,
        filtration_ranks: filtration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, IntVector};
    use crate::polytope::builtin;

    fn setup(name: &str, params: &[i64], gamma: &[i64]) -> (Polytope, Arc<Fan>, Gamma) {
        let p = builtin(name, params).unwrap();
        let g = Gamma::new(&p, IntVector::from(gamma)).unwrap();
        let fan = Arc::new(p.normal_fan());
        (p, fan, g)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn walls_of_square() {
        let (_, fan, _) = setup("cp1xcp1", &[], &[1, 2]);
        let w = walls(&fan);
        assert_eq!(w.len(), 4);
        assert!(w.contains(&Wall { a: 0, b: 1, shared: vec![1] }));
    }

    #[test]
    fn global_polynomials_are_continuous() {
        let (_, fan, _) = setup("cp2", &[], &[1, 2]);
        let p = Poly::variable(2, 0).mul(&Poly::variable(2, 1)).add(&Poly::one(2));
        let pp = PiecewisePoly::global(fan, p).unwrap();
        assert!(pp.is_continuous().continuous);
    }

    #[test]
    fn mismatched_neighbours_are_discontinuous() {
        let (_, fan, _) = setup("cp1xcp1", &[], &[1, 2]);
        // cones 0 and 1 share the ray (0,1)
        let mut polys = vec![Poly::zero(2); 4];
        polys[0] = Poly::variable(2, 0);
        polys[1] = Poly::variable(2, 1);
        let pp = PiecewisePoly::new(fan, polys).unwrap();
        let r = pp.is_continuous();
        assert!(!r.continuous);
        let w = r.witness.unwrap();
        assert_eq!((w.a, w.b), (0, 1));
    }

    #[test]
    fn generators_on_examples() {
        let (_, fan, _) = setup("cp1xcp1", &[], &[1, 2]);
        let g0 = make_g(&fan, 0).unwrap();
        assert!(g0.is_continuous().continuous);
        // ray 0 = (1,0) lies in cones 0 and 3
        assert_eq!(g0.on_cone(0), &Poly::variable(2, 0));
        assert_eq!(g0.on_cone(3), &Poly::variable(2, 0));
        assert!(g0.on_cone(1).is_zero() && g0.on_cone(2).is_zero());

        let (_, fan, _) = setup("cp2", &[], &[1, 2]);
        let g2 = make_g(&fan, 2).unwrap();
        // cone 1 = vertex (-2,1), rays (0,1) and (-1,-1)
        assert_eq!(g2.on_cone(1), &Poly::variable(2, 0).scale(&rat(-1)));
        assert!(g2.is_continuous().continuous);

        let (_, fan, _) = setup("segment", &[0, 1], &[1]);
        let g = make_g(&fan, 0).unwrap();
        assert_eq!(g.on_cone(0), &Poly::variable(1, 0));
        assert!(g.on_cone(1).is_zero());
    }

    #[test]
    fn phi_examples() {
        let (p, fan, gamma) = setup("cp2", &[], &[1, 2]);
        let t = f_table(&p, &gamma).unwrap();
        for r in 0..3 {
            assert_eq!(phi(&make_g(&fan, r).unwrap(), &gamma).unwrap(), t.row(r));
        }
        let x1 = PiecewisePoly::global(fan.clone(), Poly::variable(2, 0)).unwrap();
        assert_eq!(phi(&x1, &gamma).unwrap(), ints(&[1, 1, 1]));

        let (_, fan, gamma) = setup("cp1xcp1", &[], &[1, 2]);
        let g0 = make_g(&fan, 0).unwrap();
        assert_eq!(phi(&g0.mul(&g0), &gamma).unwrap(), ints(&[1, 0, 0, 1]));
    }

    #[test]
    fn phi_rejects_mixed_degrees() {
        let (_, fan, gamma) = setup("cp2", &[], &[1, 2]);
        let g0 = make_g(&fan, 0).unwrap();
        let mixed = g0.add(&g0.mul(&g0));
        assert!(matches!(phi(&mixed, &gamma), Err(Error::NotHomogeneous { .. })));
        let one = PiecewisePoly::one(fan.clone());
        let uneven = g0.add(&one);
        assert!(matches!(phi(&uneven, &gamma), Err(Error::NotHomogeneous { .. })));
    }

    #[test]
    fn verify_on_examples() {
        for (name, params, gamma, ranks) in [
            ("cp2", &[][..], &[1, 2][..], vec![1, 2, 3]),
            ("cp1xcp1", &[], &[1, 2], vec![1, 3, 4]),
            ("segment", &[0, 1], &[1], vec![1, 2]),
        ] {
            let (p, _, g) = setup(name, params, gamma);
            let r = verify_brion(&p, &g, None).unwrap();
            assert!(r.all_ok(), "{name}: {r:?}");
            assert_eq!(r.surjectivity_ranks, ranks);
            assert!(r.products_checked > 0);
        }
    }

    #[test]
    fn document_shape() {
        let (_, fan, _) = setup("segment", &[0, 1], &[1]);
        let doc = make_g(&fan, 0).unwrap().document();
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"cones":[0,1],"polys":[[{"exp":[1],"coef":"1"}],[]]}"#);
    }
}
